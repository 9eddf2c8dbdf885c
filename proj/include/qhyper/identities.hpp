#pragma once

// Registry of summation identities: the classical one-variable summations,
// Milne's and Bhatnagar's A_r summations, and the new A_r 8phi7, 6phi5 and
// 6psi6 summations. Each identity evaluates its multiple series (left side)
// and its closed-form product (right side) in either backend.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhyper/lattice.hpp"
#include "qhyper/numeric_config.hpp"
#include "qhyper/qfactorial_source.hpp"
#include "qhyper/report.hpp"
#include "qhyper/scalar.hpp"

namespace qhyper {

enum class IdentityId {
    jackson_8phi7,
    bailey_6psi6,
    qbinomial,
    milne_ar_8phi7,
    bhatnagar_ar_6phi5,
    new_ar_8phi7,
    new_ar_8phi7_poly,
    new_ar_8phi7_special,
    new_ar_6phi5_nonterm,
    new_ar_6phi5_term,
    new_ar_6psi6,
};

std::string_view to_string(IdentityId id) noexcept;
std::optional<IdentityId> parse_identity(std::string_view name);
const std::vector<IdentityId>& all_identities();

enum class Field { q, a, b, c, d, z, c_vec, e_vec, x_vec, n_vec, N };

std::string_view to_string(Field field) noexcept;

/// Values for the free symbols of an identity. C = prod c_i and E = prod e_i
/// are derived on demand.
struct ParameterAssignment {
    std::size_t r = 1;
    std::optional<Scalar> q, a, b, c, d, z;
    std::optional<std::vector<Scalar>> c_vec, e_vec, x_vec;
    std::optional<MultiIndex> n_vec;
    std::optional<std::int64_t> N;

    Scalar C() const;
    Scalar E() const;
    bool has(Field field) const;
    Backend backend() const;
    /// Every scalar converted to another backend (Float -> Exact is an error).
    ParameterAssignment to(Backend backend) const;
    /// name=value pairs in a fixed order, for reports.
    std::vector<std::pair<std::string, std::string>> describe() const;
};

struct Constraint {
    std::string description;
    std::function<bool(const ParameterAssignment&)> holds;
};

struct IdentityDescriptor {
    IdentityId id;
    std::string title;
    std::vector<Field> schema;
    SummationDomain::Kind domain;
    bool rank_one_only = false;
    std::vector<Constraint> constraints;
    /// Summand at a lattice point, evaluated from scratch.
    std::function<Scalar(const MultiIndex&, const ParameterAssignment&, const NumericConfig&)> lhs_term;
    std::function<Scalar(const ParameterAssignment&, const NumericConfig&)> rhs_value;
    std::vector<std::string> notes;

    bool terminating() const noexcept {
        return domain == SummationDomain::Kind::Box || domain == SummationDomain::Kind::Simplex;
    }
};

const IdentityDescriptor& descriptor(IdentityId id);

/// Schema presence, rank consistency and every registered constraint.
void validate_parameters(IdentityId id, const ParameterAssignment& params);

// ---------------------------------------------------------------------------
// Series kernels

enum class Guard { Generic, Exempt };

/// The summand and right side of one identity at fixed parameters. All
/// q-shifted factorial bases are registered at construction; term() fetches
/// them from a QFactorialSource built over bases().
class SeriesKernel {
public:
    virtual ~SeriesKernel() = default;

    const Scalar& q() const noexcept { return q_; }
    std::size_t rank() const noexcept { return r_; }
    const std::vector<Scalar>& bases() const noexcept { return bases_; }
    /// Values that must avoid integer powers of q for the instance to be
    /// free of poles and accidental zeros.
    const std::vector<Scalar>& guarded() const noexcept { return guarded_; }

    virtual SummationDomain domain() const = 0;
    virtual Scalar term(const MultiIndex& k, QFactorialSource& source) const = 0;
    virtual Scalar rhs(const NumericConfig& cfg) const = 0;
    /// Argument whose powers drive convergence of a nonterminating series.
    virtual std::optional<Scalar> argument() const { return std::nullopt; }

    std::unique_ptr<QFactorialSource> source(FactorialStrategy strategy, const NumericConfig& cfg) const;

protected:
    SeriesKernel(const Scalar& q, std::size_t r) : q_(q), r_(r) {}

    std::size_t slot(Scalar base, Guard guard = Guard::Generic);
    void guard(Scalar value) { guarded_.push_back(std::move(value)); }

    Scalar q_;
    std::size_t r_;

private:
    std::vector<Scalar> bases_;
    std::vector<Scalar> guarded_;
};

std::unique_ptr<SeriesKernel> make_kernel(IdentityId id, const ParameterAssignment& params,
                                          const NumericConfig& cfg);

// ---------------------------------------------------------------------------
// Evaluation

struct Evaluation {
    Scalar value;
    TruncationInfo truncation;
};

/// Sums the kernel over its domain. Finite domains are summed exactly;
/// unilateral series by |k|-shells until a geometric tail bound drops below
/// epsilon_tail; bilateral series over cubes of doubling half-width.
Evaluation sum_series(const SeriesKernel& kernel, QFactorialSource& source, const NumericConfig& cfg);

Evaluation eval_lhs(IdentityId id, const ParameterAssignment& params, const NumericConfig& cfg,
                    FactorialStrategy strategy = FactorialStrategy::Cached);
Scalar eval_rhs(IdentityId id, const ParameterAssignment& params, const NumericConfig& cfg);

/// Exact backend: pass iff lhs == rhs. Float: pass iff the relative residual
/// is below 100 * epsilon_tail. Errors become failed reports.
VerificationReport verify_instance(IdentityId id, const ParameterAssignment& params,
                                   const NumericConfig& cfg,
                                   FactorialStrategy strategy = FactorialStrategy::Cached);

// ---------------------------------------------------------------------------
// Sampling

struct SamplingOptions {
    Backend backend = Backend::exact();
    std::int64_t max_box_entry = 3;  // n_i in [0, max_box_entry]
    std::int64_t max_total = 5;      // N in [0, max_total]
    double max_argument = 0.6;       // |series argument| bound for nonterminating ids
    std::size_t max_attempts = 20000;
};

/// Deterministic rejection sampler. Exact: rationals +-p/s with 1 <= p, s <= 64.
/// Float: dyadic rationals +-p/2^e with 1 <= p <= 64, 0 <= e <= 6. In both,
/// 1/10 < |q| < 1/2, every guarded value avoids q^t over the reachable
/// range, and nonterminating ids keep |argument| <= max_argument.
ParameterAssignment sample_parameters(IdentityId id, std::size_t r, std::uint64_t seed,
                                      const NumericConfig& cfg, const SamplingOptions& options = {});

/// Mixes (seed, id, r, trial) into a per-trial seed.
std::uint64_t trial_seed(std::uint64_t seed, IdentityId id, std::size_t r, std::size_t trial);

// ---------------------------------------------------------------------------
// Series classification

struct SeriesClassifier {
    enum class Kind { Phi, Psi };
    Kind kind = Kind::Phi;
    std::vector<Scalar> upper;
    std::vector<Scalar> lower;
    Scalar argument;
    Scalar base;  // q
    /// Set when the pairs q sqrt(a), -q sqrt(a) / sqrt(a), -sqrt(a) are carried
    /// as the factor (1 - a q^{2k}) / (1 - a) instead of explicit parameters.
    /// For Phi it must equal upper[0].
    std::optional<Scalar> combined_special;
};

struct SeriesFlags {
    bool balanced = false;
    bool well_poised = false;
    bool very_well_poised = false;
};

SeriesFlags classify(const SeriesClassifier& series);

/// Jackson's 8phi7 and Bailey's 6psi6 in combined very-well-poised form.
SeriesClassifier jackson_series(const ParameterAssignment& params);
SeriesClassifier bailey_series(const ParameterAssignment& params);

// ---------------------------------------------------------------------------
// Degenerations

/// Cross-checks between identities at sampled parameters:
///  (i)   the 6psi6 with every e_i = a against the nonterminating 6phi5,
///        including exact vanishing of every term with some k_i < 0;
///  (ii)  the nonterminating 6phi5 at c_i = q^{-n_i}, d -> c against the
///        terminating 6phi5, term by term;
///  (iii) the c_j = q^{-n_j} case of the polynomial 8phi7 against the
///        new 8phi7 with c = q^{-|n|};
///  (iv)  the special 8phi7 against the polynomial one at b -> a^2q^{1+N}/bCd;
///  (v)   classifier flags of Jackson's and Bailey's series.
std::vector<VerificationReport> check_degenerations(std::uint64_t seed, const NumericConfig& cfg,
                                                    unsigned precision_bits = 256);

}  // namespace qhyper
