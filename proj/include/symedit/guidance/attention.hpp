// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace symedit::guidance {

/// Row-major dense matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0);
    Matrix(int r, int c, std::vector<double> values);  // Error(DimensionMismatch) on length mismatch

    double& operator()(int r, int c) noexcept { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const noexcept { return data[static_cast<std::size_t>(r) * cols + c]; }

    bool operator==(const Matrix&) const = default;
};

/// Throws Error(DimensionMismatch) when a.cols != b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);

struct AttentionProjections {
    Matrix query;  // d_model x d
    Matrix key;    // d_text x d
    Matrix value;  // d_text x d_v
};

/// Row-wise softmax(Q K^T / sqrt(d)), max-subtracted.
Matrix attention_weights(const Matrix& q, const Matrix& k, int d);

/// softmax(Q K^T / sqrt(d)) V with Q = spatial * l_Q, K = prompt * l_K,
/// V = prompt * l_V. Throws Error(DimensionMismatch) for inconsistent
/// projection sizes or d <= 0.
Matrix cross_attention(const Matrix& spatial, const Matrix& prompt, const AttentionProjections& proj, int d);

}  // namespace symedit::guidance
