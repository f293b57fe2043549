// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/guidance/guidance.hpp"

#include <cmath>

namespace symedit::guidance {

std::string to_string(const TensorShape& s) {
    return std::to_string(s.n) + "x" + std::to_string(s.c) + "x" + std::to_string(s.h) + "x" + std::to_string(s.w);
}

ConvParams ConvParams::identity(int channels) {
    ConvParams p;
    p.channels = channels;
    p.weight.assign(static_cast<std::size_t>(channels) * channels, 0.0);
    p.bias.assign(static_cast<std::size_t>(channels), 0.0);
    for (int i = 0; i < channels; ++i) p.weight[static_cast<std::size_t>(i) * channels + i] = 1.0;
    return p;
}

template <class T>
ChannelStats<T> channel_stats(const BasicTensor<T>& t) {
    const std::size_t hw = t.plane();
    if (hw < 2) throw Error(ErrorCode::TooFewElements, "channel statistics need H*W >= 2, got " + to_string(t.shape()));
    ChannelStats<T> s;
    s.n = t.shape().n;
    s.c = t.shape().c;
    s.mean.resize(static_cast<std::size_t>(s.n) * s.c);
    s.std.resize(s.mean.size());
    for (int n = 0; n < s.n; ++n) {
        for (int c = 0; c < s.c; ++c) {
            const T* p = t.data().data() + t.plane_offset(n, c);
            T sum = 0;
            for (std::size_t i = 0; i < hw; ++i) sum += p[i];
            const T mean = sum / static_cast<T>(hw);
            T sq = 0;
            for (std::size_t i = 0; i < hw; ++i) sq += (p[i] - mean) * (p[i] - mean);
            const T var = sq / static_cast<T>(hw - 1);
            const auto k = static_cast<std::size_t>(n * s.c + c);
            s.mean[k] = mean;
            s.std[k] = std::sqrt(var + static_cast<T>(kStatsEpsilon));
        }
    }
    return s;
}

template <class T>
BasicTensor<T> in_guidance(const BasicTensor<T>& cond, const BasicTensor<T>& uncond, const ConvParams& conv) {
    require_same_shape(cond, uncond, "in_guidance");
    const int channels = cond.shape().c;
    if (conv.channels != channels || conv.weight.size() != static_cast<std::size_t>(channels) * channels ||
        conv.bias.size() != static_cast<std::size_t>(channels)) {
        throw Error(ErrorCode::ShapeMismatch, "conv has " + std::to_string(conv.channels) + " channels, tensors have " +
                                                  std::to_string(channels));
    }
    const auto sc = channel_stats(cond);
    const auto su = channel_stats(uncond);
    const std::size_t hw = cond.plane();

    BasicTensor<T> normalized(cond.shape());
    for (int n = 0; n < cond.shape().n; ++n) {
        for (int c = 0; c < channels; ++c) {
            const T mu = sc.mean_at(n, c), sigma = sc.std_at(n, c);
            const T* src = uncond.data().data() + uncond.plane_offset(n, c);
            T* dst = normalized.data().data() + normalized.plane_offset(n, c);
            for (std::size_t i = 0; i < hw; ++i) dst[i] = (src[i] - mu) / sigma;
        }
    }

    BasicTensor<T> out(cond.shape());
    for (int n = 0; n < cond.shape().n; ++n) {
        for (int o = 0; o < channels; ++o) {
            T* dst = out.data().data() + out.plane_offset(n, o);
            const T bias = static_cast<T>(conv.bias[static_cast<std::size_t>(o)]);
            for (std::size_t i = 0; i < hw; ++i) dst[i] = bias;
            for (int c = 0; c < channels; ++c) {
                const T wgt = static_cast<T>(conv.weight[static_cast<std::size_t>(o) * channels + c]);
                if (wgt == T{0}) continue;
                const T* src = normalized.data().data() + normalized.plane_offset(n, c);
                for (std::size_t i = 0; i < hw; ++i) dst[i] += wgt * src[i];
            }
            const T sigma_u = su.std_at(n, o), mu_u = su.mean_at(n, o);
            for (std::size_t i = 0; i < hw; ++i) dst[i] = dst[i] * sigma_u + mu_u;
        }
    }
    return out;
}

template <class T>
BasicTensor<T> cfg_guidance(const BasicTensor<T>& cond, const BasicTensor<T>& uncond, double w) {
    require_same_shape(cond, uncond, "cfg_guidance");
    BasicTensor<T> out(cond.shape());
    const T wc = static_cast<T>(w), wu = static_cast<T>(1.0 - w);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = wc * cond[i] + wu * uncond[i];
    return out;
}

template ChannelStats<float> channel_stats(const Tensor&);
template ChannelStats<double> channel_stats(const Tensor64&);
template Tensor in_guidance(const Tensor&, const Tensor&, const ConvParams&);
template Tensor64 in_guidance(const Tensor64&, const Tensor64&, const ConvParams&);
template Tensor cfg_guidance(const Tensor&, const Tensor&, double);
template Tensor64 cfg_guidance(const Tensor64&, const Tensor64&, double);

}  // namespace symedit::guidance
