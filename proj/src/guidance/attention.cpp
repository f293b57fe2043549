// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/guidance/attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "symedit/common/error.hpp"

namespace symedit::guidance {

namespace {

std::string dims(const Matrix& m) { return std::to_string(m.rows) + "x" + std::to_string(m.cols); }

}  // namespace

Matrix::Matrix(int r, int c, double fill) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw Error(ErrorCode::DimensionMismatch, "negative matrix dimension");
}

Matrix::Matrix(int r, int c, std::vector<double> values) : rows(r), cols(c), data(std::move(values)) {
    if (r < 0 || c < 0 || data.size() != static_cast<std::size_t>(r) * c) {
        throw Error(ErrorCode::DimensionMismatch, "matrix data does not match " + std::to_string(r) + "x" + std::to_string(c));
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw Error(ErrorCode::DimensionMismatch, "cannot multiply " + dims(a) + " by " + dims(b));
    Matrix out(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const double aik = a(i, k);
            for (int j = 0; j < b.cols; ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

Matrix attention_weights(const Matrix& q, const Matrix& k, int d) {
    if (d <= 0) throw Error(ErrorCode::DimensionMismatch, "head dimension must be > 0");
    if (q.cols != k.cols) throw Error(ErrorCode::DimensionMismatch, "query " + dims(q) + " and key " + dims(k) + " widths differ");
    if (k.rows < 1) throw Error(ErrorCode::DimensionMismatch, "attention needs at least one key");
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Matrix out(q.rows, k.rows);
    for (int i = 0; i < q.rows; ++i) {
        for (int j = 0; j < k.rows; ++j) {
            double dot = 0.0;
            for (int c = 0; c < q.cols; ++c) dot += q(i, c) * k(j, c);
            out(i, j) = dot * scale;
        }
        double peak = out(i, 0);
        for (int j = 1; j < k.rows; ++j) peak = std::max(peak, out(i, j));
        double total = 0.0;
        for (int j = 0; j < k.rows; ++j) {
            out(i, j) = std::exp(out(i, j) - peak);
            total += out(i, j);
        }
        for (int j = 0; j < k.rows; ++j) out(i, j) /= total;
    }
    return out;
}

Matrix cross_attention(const Matrix& spatial, const Matrix& prompt, const AttentionProjections& proj, int d) {
    if (proj.key.rows != proj.value.rows) {
        throw Error(ErrorCode::DimensionMismatch, "key " + dims(proj.key) + " and value " + dims(proj.value) +
                                                      " projections take different inputs");
    }
    const Matrix q = matmul(spatial, proj.query);
    const Matrix k = matmul(prompt, proj.key);
    const Matrix v = matmul(prompt, proj.value);
    return matmul(attention_weights(q, k, d), v);
}

}  // namespace symedit::guidance
