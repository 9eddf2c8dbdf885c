#pragma once

// Multidimensional lower-triangular matrix inverses: the general pair built
// from arbitrary sequences (a_t) and (c_j(t)), its geometric specialisation
// with parameters a, b, x_1..x_r, and the inverse-relation replay that turns
// Milne's A_r 8phi7 summation into the new one.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qhyper/lattice.hpp"
#include "qhyper/numeric_config.hpp"
#include "qhyper/report.hpp"
#include "qhyper/scalar.hpp"

namespace qhyper {

/// A scalar sequence indexed by t in Z.
class Sequence {
public:
    /// base * ratio^t for every t.
    static Sequence geometric(Scalar base, Scalar ratio);
    /// values[t - first] for first <= t < first + values.size(); RangeError elsewhere.
    static Sequence table(std::int64_t first, std::vector<Scalar> values);

    Scalar at(std::int64_t t) const;
    bool is_geometric() const noexcept { return geometric_; }

private:
    bool geometric_ = true;
    Scalar base_;
    Scalar ratio_;
    std::int64_t first_ = 0;
    std::vector<Scalar> values_;
};

struct SequenceSpec {
    Sequence a;
    std::vector<Sequence> c;  // c_1 .. c_r

    std::size_t rank() const noexcept { return c.size(); }
};

/// Parameters of the geometric pair.
struct MmicParams {
    Scalar a;
    Scalar b;
    Scalar q;
    std::vector<Scalar> x;

    std::size_t rank() const noexcept { return x.size(); }
};

/// The general pair, entries defined for k <= n (resp. l <= k).
Scalar f_general(const MultiIndex& n, const MultiIndex& k, const SequenceSpec& s,
                 const NumericConfig& cfg = {});
Scalar g_general(const MultiIndex& k, const MultiIndex& l, const SequenceSpec& s,
                 const NumericConfig& cfg = {});

Scalar f_mmic(const MultiIndex& n, const MultiIndex& k, const MmicParams& p,
              const NumericConfig& cfg = {});
Scalar g_mmic(const MultiIndex& k, const MultiIndex& l, const MmicParams& p,
              const NumericConfig& cfg = {});

/// Sequences realising the geometric pair inside the general one:
/// a_t = w a q^t, c_i(t) = w x_i q^t, valid when b = w^{r+1} x_1 ... x_r.
SequenceSpec mmic_as_general(const Scalar& w, const MmicParams& p);

/// b = w^{r+1} x_1 ... x_r, the parameter choice that keeps the (r+1)-th root rational.
Scalar mmic_b_from_root(const Scalar& w, std::span<const Scalar> x);

using MatrixEntry = std::function<Scalar(const MultiIndex&, const MultiIndex&)>;

struct MatrixPair {
    MatrixEntry f;
    MatrixEntry g;
    std::variant<SequenceSpec, MmicParams> provenance;
    std::size_t rank = 0;

    static MatrixPair general(SequenceSpec spec, const NumericConfig& cfg = {});
    static MatrixPair mmic(MmicParams params, const NumericConfig& cfg = {});
};

/// Checks sum_{n >= k >= l} f(n,k) g(k,l) = delta_{nl} and the dual relation
/// with f and g interchanged, for all 0 <= l <= n <= bound. The report names
/// the first failing (n, l) pair and its residual.
VerificationReport verify_orthogonality(const MatrixPair& pair, const MultiIndex& bound);

/// Parameters of the inverse-relation replay.
struct InverseRelationParams {
    Scalar a, b, c, d, q;
    std::vector<Scalar> x;

    std::size_t rank() const noexcept { return x.size(); }
};

/// The sequence a_k the replay starts from.
Scalar relation_sequence_a(const MultiIndex& k, const InverseRelationParams& p,
                           const NumericConfig& cfg = {});
/// The sequence b_n produced by Milne's summation.
Scalar relation_sequence_b(const MultiIndex& n, const InverseRelationParams& p,
                           const NumericConfig& cfg = {});

/// Verifies sum_{0<=k<=n} f_mmic(n,k) a_k = b_n for every n <= bound and then
/// the inverted form sum_{0<=l<=k} g_mmic(k,l) b_l = a_k for every k <= bound.
VerificationReport inverse_relation_check(const MultiIndex& bound, const InverseRelationParams& p,
                                          const NumericConfig& cfg = {});

}  // namespace qhyper
