#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dme/nn/tape.hpp"
#include "dme/util/rng.hpp"

namespace dme::nn {

// f builds a 1x1 scalar trace from parameter leaves created in order.
using TracedScalarFn = std::function<Var(Tape&, std::span<const Var>)>;

struct GradCheckOptions {
    double eps = 1e-5;
    // 0 checks every entry. Otherwise a seeded subset of at most this many
    // entries per parameter is perturbed (the analytic gradient is still the
    // full reverse pass); large graphs stay checkable in bounded time.
    std::size_t max_entries_per_param = 0;
    std::uint64_t seed = 0x5eedc0de;
};

// Central finite differences per parameter entry against the reverse-mode
// gradient. Returns max over checked entries of |analytic - numeric| /
// max(1, |numeric|).
inline double grad_check(const TracedScalarFn& f, std::span<Matrix* const> params,
                         const GradCheckOptions& opt = {}) {
    if (opt.eps < 1e-7 || opt.eps > 1e-3)
        throw std::invalid_argument("grad_check: eps must be in [1e-7, 1e-3]");

    auto trace = [&](Tape& tape) {
        std::vector<Var> vars;
        vars.reserve(params.size());
        for (Matrix* p : params) vars.push_back(tape.leaf(*p));
        Var out = f(tape, vars);
        if (tape.value(out).rows() != 1 || tape.value(out).cols() != 1)
            throw std::invalid_argument("grad_check: function output is " +
                                        tape.value(out).shape_str() + ", expected scalar");
        return std::pair{out, vars};
    };

    // analytic gradients
    std::vector<Matrix> analytic;
    {
        Tape tape;
        auto [out, vars] = trace(tape);
        tape.backward(out);
        for (Var v : vars) analytic.push_back(tape.grad(v));
    }

    auto eval = [&]() {
        Tape tape;
        auto [out, vars] = trace(tape);
        return tape.value(out)(0, 0);
    };

    Rng rng(opt.seed);
    double worst = 0.0;
    for (std::size_t pi = 0; pi < params.size(); ++pi) {
        Matrix& p = *params[pi];
        std::vector<std::size_t> entries;
        if (opt.max_entries_per_param == 0 || p.size() <= opt.max_entries_per_param) {
            entries.resize(p.size());
            for (std::size_t i = 0; i < p.size(); ++i) entries[i] = i;
        } else {
            for (std::size_t i = 0; i < opt.max_entries_per_param; ++i)
                entries.push_back(static_cast<std::size_t>(rng.next_u64() % p.size()));
        }
        for (std::size_t idx : entries) {
            const double saved = p.data()[idx];
            p.data()[idx] = saved + opt.eps;
            const double f_plus = eval();
            p.data()[idx] = saved - opt.eps;
            const double f_minus = eval();
            p.data()[idx] = saved;
            const double numeric = (f_plus - f_minus) / (2.0 * opt.eps);
            const double rel = std::abs(analytic[pi].data()[idx] - numeric) /
                               std::max(1.0, std::abs(numeric));
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

inline double grad_check(const TracedScalarFn& f, std::span<Matrix* const> params, double eps) {
    GradCheckOptions opt;
    opt.eps = eps;
    return grad_check(f, params, opt);
}

} // namespace dme::nn
