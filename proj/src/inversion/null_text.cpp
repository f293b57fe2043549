// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include "symedit/inversion/null_text.hpp"

#include <cmath>
#include <sstream>

#include "symedit/common/error.hpp"

namespace symedit::inversion {

using guidance::ConvParams;

std::string to_string(const GuidanceMode& mode) {
    if (mode.kind == GuidanceMode::Kind::IN) return "IN";
    std::ostringstream out;
    out << "CFG(" << mode.w << ")";
    return out.str();
}

Tensor64 guided_eps(const Tensor64& z, int t, const PromptEmbedding& prompt, const PromptEmbedding& null,
                    const ConvParams& conv, const ToyDenoiser& den, const GuidanceMode& mode) {
    const Tensor64 cond = den(z, t, prompt);
    const Tensor64 uncond = den(z, t, null);
    if (mode.kind == GuidanceMode::Kind::IN) return guidance::in_guidance(cond, uncond, conv);
    return guidance::cfg_guidance(cond, uncond, mode.w);
}

namespace {

// Flat parameter vector: null embedding, then (IN only) conv weight and bias.
struct Params {
    PromptEmbedding null;
    ConvParams conv;
    bool with_conv = false;

    std::vector<double> pack() const {
        std::vector<double> v = null.values;
        if (with_conv) {
            v.insert(v.end(), conv.weight.begin(), conv.weight.end());
            v.insert(v.end(), conv.bias.begin(), conv.bias.end());
        }
        return v;
    }
    void unpack(const std::vector<double>& v) {
        const std::size_t d = null.values.size();
        std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d), null.values.begin());
        if (!with_conv) return;
        const std::size_t w = conv.weight.size();
        std::copy(v.begin() + static_cast<std::ptrdiff_t>(d), v.begin() + static_cast<std::ptrdiff_t>(d + w),
                  conv.weight.begin());
        std::copy(v.begin() + static_cast<std::ptrdiff_t>(d + w), v.end(), conv.bias.begin());
    }
};

// Loss for one timestep with the conditional branch and the latent drift
// precomputed, since only the unconditional branch depends on the parameters.
class StepLoss {
public:
    StepLoss(const Tensor64& zbar, const Tensor64& target, int t, const PromptEmbedding& prompt, const ToyDenoiser& den,
             const Schedule& s, const GuidanceMode& mode)
        : target_(target), den_(den), mode_(mode), cond_(den(zbar, t, prompt)), drift_(zbar.shape()),
          a_zbar_(zbar.shape()), coef_(s.noise_coef(t)) {
        const double k = s.drift(t), a = den.a(t);
        for (std::size_t i = 0; i < zbar.size(); ++i) {
            drift_[i] = k * zbar[i];
            a_zbar_[i] = a * zbar[i];
        }
    }

    Tensor64 predict(const Params& p) const {
        const std::vector<double> be = den_.project(p.null);
        Tensor64 uncond(a_zbar_.shape());
        for (std::size_t i = 0; i < uncond.size(); ++i) uncond[i] = a_zbar_[i] + be[i];
        const Tensor64 eps = mode_.kind == GuidanceMode::Kind::IN ? guidance::in_guidance(cond_, uncond, p.conv)
                                                                  : guidance::cfg_guidance(cond_, uncond, mode_.w);
        Tensor64 z(eps.shape());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = drift_[i] + coef_ * eps[i];
        return z;
    }

    double operator()(const Params& p) const {
        const Tensor64 z = predict(p);
        double acc = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double d = target_[i] - z[i];
            acc += d * d;
        }
        return acc;
    }

private:
    const Tensor64& target_;
    const ToyDenoiser& den_;
    GuidanceMode mode_;
    Tensor64 cond_;
    Tensor64 drift_;
    Tensor64 a_zbar_;
    double coef_;
};

double checked_loss(double loss, int t) {
    if (!std::isfinite(loss)) throw Error(ErrorCode::NonFiniteLoss, "loss diverged at step " + std::to_string(t));
    return loss;
}

}  // namespace

NullTextResult null_text_optimize(const Trajectory<double>& trajectory, const PromptEmbedding& source_prompt,
                                  const ToyDenoiser& den, const Schedule& s, const NullTextConfig& cfg) {
    if (cfg.inner_steps < 1) throw Error(ErrorCode::InvalidArgument, "null-text optimization needs N >= 1");
    if (!(cfg.eta >= 0.0)) throw Error(ErrorCode::InvalidArgument, "step size must be >= 0");
    if (trajectory.latents.size() != static_cast<std::size_t>(s.T) + 1) {
        throw Error(ErrorCode::LengthMismatch, "trajectory length does not match the schedule");
    }

    const bool in_mode = cfg.mode.kind == GuidanceMode::Kind::IN;
    Params params{embed_prompt("", den.dim()), ConvParams::identity(den.shape().c), in_mode};
    std::vector<double> v = params.pack();
    std::vector<double> m(v.size(), 0.0), vel(v.size(), 0.0);
    long adam_t = 0;

    NullTextResult result;
    result.null_embeddings.resize(static_cast<std::size_t>(s.T));
    result.step_convs.resize(static_cast<std::size_t>(s.T));
    result.loss_curve.reserve(static_cast<std::size_t>(s.T) * cfg.inner_steps);

    Tensor64 zbar = trajectory.latents.back();
    std::vector<double> grad(v.size()), probe;
    for (int t = s.T; t >= 1; --t) {
        const StepLoss loss(zbar, trajectory.latents[static_cast<std::size_t>(t - 1)], t, source_prompt, den, s, cfg.mode);
        auto eval = [&](const std::vector<double>& x) {
            Params p = params;
            p.unpack(x);
            return checked_loss(loss(p), t);
        };

        for (int j = 0; j < cfg.inner_steps; ++j) {
            const double current = eval(v);
            for (std::size_t i = 0; i < v.size(); ++i) {
                probe = v;
                probe[i] = v[i] + cfg.fd_h;
                const double up = eval(probe);
                probe[i] = v[i] - cfg.fd_h;
                const double down = eval(probe);
                grad[i] = (up - down) / (2.0 * cfg.fd_h);
            }

            std::vector<double> next(v.size());
            double next_loss = 0.0;
            if (cfg.optimizer == Optimizer::AdamW) {
                const AdamConfig& a = cfg.adam;
                ++adam_t;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    m[i] = a.beta1 * m[i] + (1.0 - a.beta1) * grad[i];
                    vel[i] = a.beta2 * vel[i] + (1.0 - a.beta2) * grad[i] * grad[i];
                    const double mh = m[i] / (1.0 - std::pow(a.beta1, static_cast<double>(adam_t)));
                    const double vh = vel[i] / (1.0 - std::pow(a.beta2, static_cast<double>(adam_t)));
                    next[i] = v[i] - a.lr * (mh / (std::sqrt(vh) + a.eps) + a.weight_decay * v[i]);
                }
                next_loss = eval(next);
            } else {
                double step = cfg.eta;
                for (;;) {
                    for (std::size_t i = 0; i < v.size(); ++i) next[i] = v[i] - step * grad[i];
                    next_loss = eval(next);
                    if (!cfg.line_search || next_loss <= current) break;
                    step *= 0.5;
                    ++result.step_halvings;
                    if (step < cfg.eta * 0x1p-30) {
                        next = v;
                        next_loss = current;
                        break;
                    }
                }
            }
            v = std::move(next);
            result.loss_curve.push_back(next_loss);
        }

        params.unpack(v);
        result.null_embeddings[static_cast<std::size_t>(t - 1)] = params.null;
        result.step_convs[static_cast<std::size_t>(t - 1)] = params.conv;
        zbar = loss.predict(params);
    }
    result.conv = params.conv;
    result.reconstruction_error = guidance::rms_difference(zbar, trajectory.latents.front());
    return result;
}

Tensor64 sample(const Tensor64& z_T, const PromptEmbedding& target_prompt, const NullTextResult& nulls,
                const ToyDenoiser& den, const Schedule& s, const GuidanceMode& mode) {
    const auto steps = static_cast<std::size_t>(s.T);
    if (nulls.null_embeddings.size() != steps || nulls.step_convs.size() != steps) {
        throw Error(ErrorCode::LengthMismatch, "null-text result covers " + std::to_string(nulls.null_embeddings.size()) +
                                                   " steps, schedule has " + std::to_string(s.T));
    }
    Tensor64 z = z_T;
    for (int t = s.T; t >= 1; --t) {
        const auto i = static_cast<std::size_t>(t - 1);
        z = ddim_step(z, t, guided_eps(z, t, target_prompt, nulls.null_embeddings[i], nulls.step_convs[i], den, mode), s);
    }
    return z;
}

}  // namespace symedit::inversion
