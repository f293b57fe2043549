// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/inversion/diffusion.hpp"

#include <cmath>
#include <random>

#include "symedit/common/error.hpp"
#include "symedit/common/hash.hpp"

namespace symedit::inversion {

namespace {

void check_step(const Schedule& s, int t) {
    if (t < 1 || t > s.T) {
        throw Error(ErrorCode::StepOutOfRange, "step " + std::to_string(t) + " outside [1, " + std::to_string(s.T) + "]");
    }
}

template <class T>
void require_finite(const BasicTensor<T>& z, const char* what) {
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (!std::isfinite(z[i])) throw Error(ErrorCode::NumericalDivergence, std::string(what) + " is not finite");
    }
}

// Modified Gram-Schmidt over `count` vectors of length `len`, stored with
// the given strides. Vectors that collapse are left at zero.
void orthonormalize(std::vector<double>& m, int count, int len, std::size_t vec_stride, std::size_t elem_stride) {
    for (int i = 0; i < count; ++i) {
        auto at = [&](int v, int e) -> double& { return m[v * vec_stride + e * elem_stride]; };
        for (int j = 0; j < i; ++j) {
            double dot = 0.0;
            for (int e = 0; e < len; ++e) dot += at(i, e) * at(j, e);
            for (int e = 0; e < len; ++e) at(i, e) -= dot * at(j, e);
        }
        double norm = 0.0;
        for (int e = 0; e < len; ++e) norm += at(i, e) * at(i, e);
        norm = std::sqrt(norm);
        for (int e = 0; e < len; ++e) at(i, e) = norm > 1e-12 ? at(i, e) / norm : 0.0;
    }
}

}  // namespace

double Schedule::drift(int t) const {
    check_step(*this, t);
    return std::sqrt(alphas_bar[static_cast<std::size_t>(t - 1)] / alphas_bar[static_cast<std::size_t>(t)]);
}

double Schedule::noise_coef(int t) const {
    check_step(*this, t);
    return std::sqrt(1.0 / alphas_bar[static_cast<std::size_t>(t - 1)] - 1.0) -
           std::sqrt(1.0 / alphas_bar[static_cast<std::size_t>(t)] - 1.0);
}

Schedule make_schedule(int T, double beta_start, double beta_end) {
    if (T < 1) throw Error(ErrorCode::InvalidRange, "schedule needs T >= 1");
    if (!(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0)) {
        throw Error(ErrorCode::InvalidRange, "betas must satisfy 0 < beta_start <= beta_end < 1");
    }
    Schedule s;
    s.T = T;
    s.betas.resize(static_cast<std::size_t>(T));
    for (int i = 0; i < T; ++i) {
        s.betas[static_cast<std::size_t>(i)] =
            T == 1 ? beta_start : beta_start + (beta_end - beta_start) * static_cast<double>(i) / (T - 1);
    }
    s.alphas_bar.assign(1, 1.0);
    for (double b : s.betas) s.alphas_bar.push_back(s.alphas_bar.back() * (1.0 - b));
    return s;
}

template <class T>
BasicTensor<T> ddim_step(const BasicTensor<T>& z_t, int t, const BasicTensor<T>& eps, const Schedule& s) {
    check_step(s, t);
    guidance::require_same_shape(z_t, eps, "ddim_step");
    const T k = static_cast<T>(s.drift(t)), c = static_cast<T>(s.noise_coef(t));
    BasicTensor<T> out(z_t.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = k * z_t[i] + c * eps[i];
    return out;
}

template <class T>
BasicTensor<T> ddim_inverse_step(const BasicTensor<T>& z_prev, int t, const BasicTensor<T>& eps, const Schedule& s) {
    check_step(s, t);
    guidance::require_same_shape(z_prev, eps, "ddim_inverse_step");
    const auto ti = static_cast<std::size_t>(t);
    const T k = static_cast<T>(std::sqrt(s.alphas_bar[ti] / s.alphas_bar[ti - 1]));
    const T c = static_cast<T>(s.noise_coef(t));
    BasicTensor<T> out(z_prev.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = k * (z_prev[i] - c * eps[i]);
    return out;
}

PromptEmbedding embed_prompt(std::string_view text, int dim) {
    PromptEmbedding e;
    e.values.assign(static_cast<std::size_t>(dim), 0.0);
    if (text.empty()) return e;
    std::mt19937_64 rng(fnv1a64(text));
    std::normal_distribution<double> normal(0.0, 1.0);
    double norm = 0.0;
    for (double& v : e.values) {
        v = normal(rng);
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : e.values) v /= norm;
    return e;
}

ToyDenoiser::ToyDenoiser(std::uint64_t seed, int steps, TensorShape shape, int dim)
    : shape_(shape), steps_(steps), dim_(dim) {
    if (steps < 1 || dim < 1 || shape.count() == 0) throw Error(ErrorCode::InvalidArgument, "invalid denoiser dimensions");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-0.05, 0.05);
    a_.resize(static_cast<std::size_t>(steps) + 1);
    for (double& v : a_) v = uniform(rng);

    const int n = static_cast<int>(shape.count());
    std::normal_distribution<double> normal(0.0, 1.0);
    b_.resize(static_cast<std::size_t>(n) * dim);
    for (double& v : b_) v = normal(rng);
    if (n >= dim) {
        orthonormalize(b_, dim, n, 1, static_cast<std::size_t>(dim));  // columns
    } else {
        orthonormalize(b_, n, dim, static_cast<std::size_t>(dim), 1);  // rows
    }
    for (double& v : b_) v *= 60.0;
}

std::vector<double> ToyDenoiser::project(const PromptEmbedding& e) const {
    if (static_cast<int>(e.values.size()) != dim_) {
        throw Error(ErrorCode::ShapeMismatch, "embedding has " + std::to_string(e.values.size()) + " values, denoiser expects " +
                                                  std::to_string(dim_));
    }
    std::vector<double> out(shape_.count(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double* row = &b_[i * static_cast<std::size_t>(dim_)];
        double acc = 0.0;
        for (int k = 0; k < dim_; ++k) acc += row[k] * e.values[static_cast<std::size_t>(k)];
        out[i] = acc;
    }
    return out;
}

template <class T>
BasicTensor<T> ToyDenoiser::operator()(const BasicTensor<T>& z, int t, const PromptEmbedding& e) const {
    if (z.shape() != shape_) {
        throw Error(ErrorCode::ShapeMismatch,
                    "latent " + guidance::to_string(z.shape()) + " does not match denoiser " + guidance::to_string(shape_));
    }
    if (t < 0 || t > steps_) throw Error(ErrorCode::StepOutOfRange, "denoiser step " + std::to_string(t) + " out of range");
    const std::vector<double> be = project(e);
    const double at = a_[static_cast<std::size_t>(t)];
    BasicTensor<T> out(shape_);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<T>(at * static_cast<double>(z[i]) + be[i]);
    return out;
}

template <class T>
Trajectory<T> ddim_invert(const BasicTensor<T>& z0, const PromptEmbedding& prompt, const ToyDenoiser& den,
                          const Schedule& s) {
    require_finite(z0, "inversion input");
    Trajectory<T> traj;
    traj.latents.push_back(z0);
    for (int t = 1; t <= s.T; ++t) {
        traj.eps.push_back(den(traj.latents.back(), t, prompt));
        traj.latents.push_back(ddim_inverse_step(traj.latents.back(), t, traj.eps.back(), s));
        require_finite(traj.latents.back(), "inverted latent");
    }
    return traj;
}

template <class T>
BasicTensor<T> sample_frozen(const BasicTensor<T>& z_T, const std::vector<BasicTensor<T>>& eps, const Schedule& s) {
    if (eps.size() != static_cast<std::size_t>(s.T)) {
        throw Error(ErrorCode::LengthMismatch, "expected " + std::to_string(s.T) + " eps values, got " + std::to_string(eps.size()));
    }
    BasicTensor<T> z = z_T;
    for (int t = s.T; t >= 1; --t) z = ddim_step(z, t, eps[static_cast<std::size_t>(t - 1)], s);
    return z;
}

template Tensor ddim_step(const Tensor&, int, const Tensor&, const Schedule&);
template Tensor64 ddim_step(const Tensor64&, int, const Tensor64&, const Schedule&);
template Tensor ddim_inverse_step(const Tensor&, int, const Tensor&, const Schedule&);
template Tensor64 ddim_inverse_step(const Tensor64&, int, const Tensor64&, const Schedule&);
template Tensor ToyDenoiser::operator()(const Tensor&, int, const PromptEmbedding&) const;
template Tensor64 ToyDenoiser::operator()(const Tensor64&, int, const PromptEmbedding&) const;
template Trajectory<float> ddim_invert(const Tensor&, const PromptEmbedding&, const ToyDenoiser&, const Schedule&);
template Trajectory<double> ddim_invert(const Tensor64&, const PromptEmbedding&, const ToyDenoiser&, const Schedule&);
template Tensor sample_frozen(const Tensor&, const std::vector<Tensor>&, const Schedule&);
template Tensor64 sample_frozen(const Tensor64&, const std::vector<Tensor64>&, const Schedule&);

}  // namespace symedit::inversion
