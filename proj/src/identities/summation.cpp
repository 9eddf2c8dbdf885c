#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qhyper/identities.hpp"

namespace qhyper {

namespace {

double magnitude(const Scalar& x) { return x.abs().to_double(); }

Evaluation sum_finite(const SeriesKernel& kernel, QFactorialSource& source) {
    Evaluation out{Scalar::zero(source.backend()), {}};
    const SummationDomain domain = kernel.domain();
    for (const MultiIndex& k : iterate(domain)) {
        out.value += kernel.term(k, source);
        ++out.truncation.terms;
    }
    out.truncation.window = domain.kind() == SummationDomain::Kind::Box ? domain.upper().max_abs() : domain.total();
    return out;
}

// Shells |k| = L. With A_L the absolute mass of shell L, the tail past L is
// bounded by A_L rho / (1 - rho) once the shell ratio settles below
// rho = max(|z|, A_L / A_{L-1}) < 1. Two consecutive shells must pass.
Evaluation sum_unilateral(const SeriesKernel& kernel, QFactorialSource& source, const NumericConfig& cfg) {
    Evaluation out{Scalar::zero(source.backend()), {}};
    const std::size_t r = kernel.rank();
    const double z = kernel.argument() ? magnitude(*kernel.argument()) : 0.0;
    double previous = -1.0;
    int streak = 0;
    for (std::int64_t shell = 0;; ++shell) {
        if (static_cast<std::size_t>(shell) > cfg.max_terms) {
            throw Error(ErrorKind::NoConvergence, "unilateral series still above tolerance after " +
                                                      std::to_string(cfg.max_terms) + " shells");
        }
        Scalar shell_sum = Scalar::zero(source.backend());
        double mass = 0.0;
        for_each_composition(r, shell, [&](const MultiIndex& k) {
            const Scalar t = kernel.term(k, source);
            mass += magnitude(t);
            shell_sum += t;
            ++out.truncation.terms;
        });
        out.value += shell_sum;
        double tail = std::numeric_limits<double>::infinity();
        if (shell >= 1) {
            if (mass == 0.0 && previous == 0.0) {
                tail = 0.0;
            } else if (previous > 0.0) {
                const double rho = std::max(z, mass / previous);
                if (rho < 1.0) tail = mass * rho / (1.0 - rho);
            }
        }
        previous = mass;
        streak = tail < cfg.epsilon_tail * std::max(1.0, magnitude(out.value)) ? streak + 1 : 0;
        if (streak >= 2) {
            out.truncation.window = shell;
            out.truncation.tail_estimate = tail;
            return out;
        }
    }
}

// Cubes max|k_i| <= M with M doubling from 4. Stops when the increment of a
// doubling and every term on the new boundary fall below epsilon * |S|.
Evaluation sum_bilateral(const SeriesKernel& kernel, QFactorialSource& source, const NumericConfig& cfg) {
    Evaluation out{Scalar::zero(source.backend()), {}};
    const std::size_t r = kernel.rank();
    std::int64_t inner = -1;
    std::int64_t outer = 4;
    while (true) {
        if (static_cast<std::size_t>(2 * outer) > cfg.max_terms) {
            throw Error(ErrorKind::NoConvergence, "bilateral window " + std::to_string(2 * outer) +
                                                      " exceeds max_terms=" + std::to_string(cfg.max_terms));
        }
        Scalar increment = Scalar::zero(source.backend());
        double boundary = 0.0;
        for_each_cube_shell(r, inner, outer, [&](const MultiIndex& k) {
            const Scalar t = kernel.term(k, source);
            if (k.max_abs() == outer) boundary = std::max(boundary, magnitude(t));
            increment += t;
            ++out.truncation.terms;
        });
        out.value += increment;
        const double total = magnitude(out.value);
        const double change = magnitude(increment);
        if (inner >= 0 && change < cfg.epsilon_tail * std::max(1.0, total) && boundary < cfg.epsilon_tail * total) {
            out.truncation.window = outer;
            out.truncation.tail_estimate = std::max(change, boundary);
            return out;
        }
        inner = outer;
        outer *= 2;
    }
}

}  // namespace

Evaluation sum_series(const SeriesKernel& kernel, QFactorialSource& source, const NumericConfig& cfg) {
    const SummationDomain domain = kernel.domain();
    if (domain.finite()) return sum_finite(kernel, source);
    if (source.backend().is_exact()) {
        throw Error(ErrorKind::BackendMismatch,
                    to_string(domain.kind()) + " series are evaluated in the float backend only");
    }
    if (domain.kind() == SummationDomain::Kind::Unilateral) return sum_unilateral(kernel, source, cfg);
    return sum_bilateral(kernel, source, cfg);
}

}  // namespace qhyper
