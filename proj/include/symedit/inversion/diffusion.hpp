// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "symedit/guidance/tensor.hpp"

namespace symedit::inversion {

using guidance::BasicTensor;
using guidance::Tensor;
using guidance::Tensor64;
using guidance::TensorShape;

/// Linear beta schedule. alphas_bar[0] == 1 and alphas_bar[t] is the product
/// of (1 - beta_i) for i <= t, so alphas_bar has T + 1 entries.
struct Schedule {
    int T = 0;
    std::vector<double> betas;
    std::vector<double> alphas_bar;

    /// sqrt(abar[t-1] / abar[t]), the latent coefficient of one reverse step.
    double drift(int t) const;
    /// sqrt(1/abar[t-1] - 1) - sqrt(1/abar[t] - 1), the noise coefficient.
    double noise_coef(int t) const;
};

/// Throws Error(InvalidRange) unless T >= 1 and 0 < beta_start <= beta_end < 1.
/// With T == 1 the single beta is beta_start.
Schedule make_schedule(int T, double beta_start = 1e-4, double beta_end = 0.02);

/// Deterministic reverse step z_t -> z_{t-1}.
/// Throws Error(StepOutOfRange) or Error(ShapeMismatch).
template <class T>
BasicTensor<T> ddim_step(const BasicTensor<T>& z_t, int t, const BasicTensor<T>& eps, const Schedule& s);

/// Algebraic inverse of ddim_step: z_{t-1} -> z_t for a given eps.
template <class T>
BasicTensor<T> ddim_inverse_step(const BasicTensor<T>& z_prev, int t, const BasicTensor<T>& eps, const Schedule& s);

inline constexpr int kEmbeddingDim = 8;

struct PromptEmbedding {
    std::vector<double> values;
    bool operator==(const PromptEmbedding&) const = default;
};

/// Unit vector seeded by the FNV-1a hash of the text; "" maps to zeros.
PromptEmbedding embed_prompt(std::string_view text, int dim = kEmbeddingDim);

/// Linear stand-in for the noise predictor: eps(z, t, e) = a_t * z + B e.
/// a_t is uniform in [-0.05, 0.05]; B is 60 times an orthonormal basis drawn
/// from a seeded Gaussian (columns when size >= dim, rows otherwise).
class ToyDenoiser {
public:
    ToyDenoiser(std::uint64_t seed, int steps, TensorShape shape, int dim = kEmbeddingDim);

    const TensorShape& shape() const noexcept { return shape_; }
    int steps() const noexcept { return steps_; }
    int dim() const noexcept { return dim_; }
    double a(int t) const { return a_.at(static_cast<std::size_t>(t)); }

    /// B e as a flat vector of shape().count() values.
    std::vector<double> project(const PromptEmbedding& e) const;

    /// Throws Error(ShapeMismatch) for a wrong latent shape or embedding
    /// length and Error(StepOutOfRange) for t outside [0, steps].
    template <class T>
    BasicTensor<T> operator()(const BasicTensor<T>& z, int t, const PromptEmbedding& e) const;

private:
    TensorShape shape_;
    int steps_;
    int dim_;
    std::vector<double> a_;
    std::vector<double> b_;  // count x dim, row-major
};

/// latents[t] is z*_t for t = 0..T; eps[t-1] is the prediction used to reach
/// latents[t] from latents[t-1].
template <class T>
struct Trajectory {
    std::vector<BasicTensor<T>> latents;
    std::vector<BasicTensor<T>> eps;
};

/// Throws Error(NumericalDivergence) on non-finite input or intermediate values.
template <class T>
Trajectory<T> ddim_invert(const BasicTensor<T>& z0, const PromptEmbedding& prompt, const ToyDenoiser& den,
                          const Schedule& s);

/// Runs ddim_step from z_T down to z_0 reusing the recorded eps values.
/// Throws Error(LengthMismatch) when eps.size() != s.T.
template <class T>
BasicTensor<T> sample_frozen(const BasicTensor<T>& z_T, const std::vector<BasicTensor<T>>& eps, const Schedule& s);

extern template Tensor ddim_step(const Tensor&, int, const Tensor&, const Schedule&);
extern template Tensor64 ddim_step(const Tensor64&, int, const Tensor64&, const Schedule&);
extern template Tensor ddim_inverse_step(const Tensor&, int, const Tensor&, const Schedule&);
extern template Tensor64 ddim_inverse_step(const Tensor64&, int, const Tensor64&, const Schedule&);
extern template Tensor ToyDenoiser::operator()(const Tensor&, int, const PromptEmbedding&) const;
extern template Tensor64 ToyDenoiser::operator()(const Tensor64&, int, const PromptEmbedding&) const;
extern template Trajectory<float> ddim_invert(const Tensor&, const PromptEmbedding&, const ToyDenoiser&, const Schedule&);
extern template Trajectory<double> ddim_invert(const Tensor64&, const PromptEmbedding&, const ToyDenoiser&,
                                               const Schedule&);
extern template Tensor sample_frozen(const Tensor&, const std::vector<Tensor>&, const Schedule&);
extern template Tensor64 sample_frozen(const Tensor64&, const std::vector<Tensor64>&, const Schedule&);

}  // namespace symedit::inversion
