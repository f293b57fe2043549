// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "symedit/guidance/tensor.hpp"

namespace symedit::guidance {

inline constexpr double kStatsEpsilon = 1e-8;

/// Per-(n, c) statistics over the spatial plane.
template <class T>
struct ChannelStats {
    int n = 0;
    int c = 0;
    std::vector<T> mean;  // n * c, row-major
    std::vector<T> std;   // sqrt(sample variance + 1e-8)

    T mean_at(int i, int ch) const noexcept { return mean[static_cast<std::size_t>(i * c + ch)]; }
    T std_at(int i, int ch) const noexcept { return std[static_cast<std::size_t>(i * c + ch)]; }
};

/// 1x1 convolution over channels: out[o] = sum_i weight[o][i] * in[i] + bias[o].
struct ConvParams {
    int channels = 0;
    std::vector<double> weight;  // channels x channels, row-major (out, in)
    std::vector<double> bias;

    static ConvParams identity(int channels);
    bool operator==(const ConvParams&) const = default;
};

/// Divisor H*W - 1. Throws Error(TooFewElements) when H*W < 2.
template <class T>
ChannelStats<T> channel_stats(const BasicTensor<T>& t);

/// sigma_u * conv((uncond - mu_c) / sigma_c) + mu_u with statistics broadcast
/// over the spatial plane. Throws Error(ShapeMismatch) for differing shapes
/// or a conv whose channel count differs from the tensors'.
template <class T>
BasicTensor<T> in_guidance(const BasicTensor<T>& cond, const BasicTensor<T>& uncond, const ConvParams& conv);

/// w * cond + (1 - w) * uncond. Throws Error(ShapeMismatch).
template <class T>
BasicTensor<T> cfg_guidance(const BasicTensor<T>& cond, const BasicTensor<T>& uncond, double w);

extern template ChannelStats<float> channel_stats(const Tensor&);
extern template ChannelStats<double> channel_stats(const Tensor64&);
extern template Tensor in_guidance(const Tensor&, const Tensor&, const ConvParams&);
extern template Tensor64 in_guidance(const Tensor64&, const Tensor64&, const ConvParams&);
extern template Tensor cfg_guidance(const Tensor&, const Tensor&, double);
extern template Tensor64 cfg_guidance(const Tensor64&, const Tensor64&, double);

}  // namespace symedit::guidance
