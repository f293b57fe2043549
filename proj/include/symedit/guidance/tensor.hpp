// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "symedit/common/error.hpp"

namespace symedit::guidance {

struct TensorShape {
    int n = 1, c = 1, h = 1, w = 1;

    std::size_t count() const noexcept {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(c) * static_cast<std::size_t>(h) *
               static_cast<std::size_t>(w);
    }
    bool operator==(const TensorShape&) const = default;
};

std::string to_string(const TensorShape& shape);

/// Dense N x C x H x W array, row-major with W fastest.
template <class T>
class BasicTensor {
public:
    using value_type = T;

    BasicTensor() = default;

    /// Throws Error(InvalidArgument) when any dim is < 1.
    explicit BasicTensor(TensorShape shape, T fill = T{0}) : shape_(checked(shape)), data_(shape.count(), fill) {}

    /// Throws Error(ShapeMismatch) when data length differs from shape.count().
    BasicTensor(TensorShape shape, std::vector<T> data) : shape_(checked(shape)), data_(std::move(data)) {
        if (data_.size() != shape_.count()) {
            throw Error(ErrorCode::ShapeMismatch, "tensor data length " + std::to_string(data_.size()) +
                                                      " does not match shape " + to_string(shape_));
        }
    }

    const TensorShape& shape() const noexcept { return shape_; }
    std::size_t size() const noexcept { return data_.size(); }
    std::size_t plane() const noexcept { return static_cast<std::size_t>(shape_.h) * static_cast<std::size_t>(shape_.w); }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }
    const std::vector<T>& values() const noexcept { return data_; }

    T& operator[](std::size_t i) noexcept { return data_[i]; }
    const T& operator[](std::size_t i) const noexcept { return data_[i]; }

    T& at(int n, int c, int y, int x) noexcept { return data_[index(n, c, y, x)]; }
    const T& at(int n, int c, int y, int x) const noexcept { return data_[index(n, c, y, x)]; }

    /// Start of the (n, c) spatial plane.
    std::size_t plane_offset(int n, int c) const noexcept {
        return (static_cast<std::size_t>(n) * static_cast<std::size_t>(shape_.c) + static_cast<std::size_t>(c)) * plane();
    }

    template <class U>
    BasicTensor<U> cast() const {
        return BasicTensor<U>(shape_, std::vector<U>(data_.begin(), data_.end()));
    }

    bool operator==(const BasicTensor&) const = default;

private:
    static TensorShape checked(TensorShape s) {
        if (s.n < 1 || s.c < 1 || s.h < 1 || s.w < 1) {
            throw Error(ErrorCode::InvalidArgument, "tensor dims must be >= 1, got " + to_string(s));
        }
        return s;
    }
    std::size_t index(int n, int c, int y, int x) const noexcept {
        return plane_offset(n, c) + static_cast<std::size_t>(y) * static_cast<std::size_t>(shape_.w) +
               static_cast<std::size_t>(x);
    }

    TensorShape shape_;
    std::vector<T> data_;
};

using Tensor = BasicTensor<float>;
using Tensor64 = BasicTensor<double>;

/// Throws Error(ShapeMismatch) unless a and b have the same shape.
template <class T>
void require_same_shape(const BasicTensor<T>& a, const BasicTensor<T>& b, const char* what) {
    if (a.shape() != b.shape()) {
        throw Error(ErrorCode::ShapeMismatch,
                    std::string(what) + ": shapes " + to_string(a.shape()) + " and " + to_string(b.shape()) + " differ");
    }
}

/// Root mean square of a - b.
template <class T>
double rms_difference(const BasicTensor<T>& a, const BasicTensor<T>& b) {
    require_same_shape(a, b, "rms_difference");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc += d * d;
    }
    return a.size() == 0 ? 0.0 : std::sqrt(acc / static_cast<double>(a.size()));
}

}  // namespace symedit::guidance
