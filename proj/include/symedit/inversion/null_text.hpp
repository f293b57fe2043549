// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "symedit/geometry/roi.hpp"
#include "symedit/guidance/guidance.hpp"
#include "symedit/inversion/diffusion.hpp"

namespace symedit::inversion {

struct GuidanceMode {
    enum class Kind { IN, CFG };
    Kind kind = Kind::IN;
    double w = 0.0;  // only read for CFG

    static GuidanceMode instance_norm() { return {Kind::IN, 0.0}; }
    static GuidanceMode classifier_free(double w) { return {Kind::CFG, w}; }
    bool operator==(const GuidanceMode&) const = default;
};

std::string to_string(const GuidanceMode& mode);

enum class Optimizer { GradientDescent, AdamW };

struct AdamConfig {
    double lr = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;
};

struct NullTextConfig {
    int inner_steps = 10;  // N
    double eta = 1e-2;
    GuidanceMode mode;
    double fd_h = 1e-4;
    Optimizer optimizer = Optimizer::GradientDescent;
    AdamConfig adam;
    /// Halve the step while it would increase the loss (gradient descent only).
    bool line_search = true;
};

struct NullTextResult {
    std::vector<PromptEmbedding> null_embeddings;  // index t - 1
    std::vector<guidance::ConvParams> step_convs;  // index t - 1
    guidance::ConvParams conv;                     // value after the last step (t = 1)
    std::vector<double> loss_curve;                // T * N post-update losses, t = T first
    double reconstruction_error = 0.0;             // RMS of zbar_0 - z*_0
    int step_halvings = 0;
};

/// Guided noise prediction for latent z at step t.
guidance::Tensor64 guided_eps(const Tensor64& z, int t, const PromptEmbedding& prompt, const PromptEmbedding& null,
                              const guidance::ConvParams& conv, const ToyDenoiser& den, const GuidanceMode& mode);

/// For t = T..1 runs N descent steps on the null embedding (and, in IN mode,
/// the conv layer) minimizing ||z*_{t-1} - ddim_step(zbar_t, guided eps)||^2,
/// with central-difference gradients. Parameters carry over between steps and
/// start from embed_prompt("") and the identity conv.
/// Throws Error(InvalidArgument) for N < 1 or eta < 0, Error(NonFiniteLoss).
NullTextResult null_text_optimize(const Trajectory<double>& trajectory, const PromptEmbedding& source_prompt,
                                  const ToyDenoiser& den, const Schedule& s, const NullTextConfig& cfg);

/// Guided sampling from z_T. Throws Error(LengthMismatch).
Tensor64 sample(const Tensor64& z_T, const PromptEmbedding& target_prompt, const NullTextResult& nulls,
                const ToyDenoiser& den, const Schedule& s, const GuidanceMode& mode);

struct TranslateConfig {
    int T = 10;
    double beta_start = 1e-4;
    double beta_end = 0.02;
    NullTextConfig null_text;
    std::uint64_t seed = 0;
};

/// Parses {"T","N","eta","beta":[b0,b1],"mode":"IN"|{"CFG":w},"seed"};
/// omitted keys keep their defaults. Throws Error(InvalidArgument).
TranslateConfig parse_translate_config(std::string_view json_text);
std::string translate_config_to_json(const TranslateConfig& cfg);

/// Byte RGB <-> [-1, 1] latent as a 1 x 3 x H x W tensor.
Tensor64 patch_to_latent(const geometry::ImageBuffer& patch);
/// round_half_up((z + 1) * 127.5) clamped to [0, 255]; alpha from `alpha_source`.
geometry::ImageBuffer latent_to_patch(const Tensor64& z, const geometry::ImageBuffer& alpha_source);

/// Inverts the patch under the source prompt, optimizes null embeddings, and
/// resamples under the target prompt. Mask, bbox and centroid are preserved;
/// the label becomes the target prompt.
geometry::Roi translate_patch(const geometry::Roi& roi, std::string_view source_prompt, std::string_view target_prompt,
                              const TranslateConfig& cfg = {});

}  // namespace symedit::inversion
