#include <algorithm>
#include <random>
#include <string>

#include "qhyper/identities.hpp"

namespace qhyper {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// std::uniform_int_distribution is implementation-defined; this draw is not.
class Draw {
public:
    explicit Draw(std::uint64_t seed) : engine_(seed) {}

    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return lo + static_cast<std::int64_t>(v % span);
    }

    long sign() { return between(0, 1) == 0 ? 1 : -1; }

private:
    std::mt19937_64 engine_;
};

class ParameterDraw {
public:
    ParameterDraw(Draw& draw, bool dyadic) : draw_(draw), dyadic_(dyadic) {}

    mpq_class q() {
        if (dyadic_) {
            mpq_class v(draw_.sign() * draw_.between(7, 31), 64);
            v.canonicalize();
            return v;
        }
        while (true) {
            const long s = draw_.between(3, 64);
            const long p = draw_.between(1, s / 2);
            if (10 * p > s && 2 * p < s) {
                mpq_class v(draw_.sign() * p, s);
                v.canonicalize();
                return v;
            }
        }
    }

    mpq_class generic() {
        const long p = draw_.between(1, 64);
        const long sign = draw_.sign();
        if (dyadic_) {
            mpq_class v(sign * p, 1L << draw_.between(0, 6));
            v.canonicalize();
            return v;
        }
        mpq_class v(sign * p, draw_.between(1, 64));
        v.canonicalize();
        return v;
    }

private:
    Draw& draw_;
    bool dyadic_;
};

std::int64_t reach_of(const ParameterAssignment& p) {
    std::int64_t reach = 48;
    if (p.n_vec) reach = std::max(reach, p.n_vec->norm() + 2);
    if (p.N) reach = std::max(reach, *p.N + 2);
    return reach;
}

bool avoids_q_powers(const SeriesKernel& kernel, const mpq_class& q, std::int64_t reach) {
    std::vector<mpq_class> powers;
    mpq_class up = 1;
    mpq_class down = 1;
    powers.push_back(1);
    for (std::int64_t t = 1; t <= reach; ++t) {
        up *= q;
        down /= q;
        powers.push_back(up);
        powers.push_back(down);
    }
    for (const auto& g : kernel.guarded()) {
        const mpq_class& v = g.rational();
        for (const auto& pw : powers)
            if (v == pw) return false;
    }
    return true;
}

ParameterAssignment draw_assignment(IdentityId id, std::size_t r, ParameterDraw& pd, Draw& draw,
                                    const SamplingOptions& options) {
    const IdentityDescriptor& desc = descriptor(id);
    ParameterAssignment p;
    p.r = r;
    auto scalar = [&](bool is_q = false) { return Scalar(is_q ? pd.q() : pd.generic()); };
    auto vec = [&] {
        std::vector<Scalar> v;
        for (std::size_t i = 0; i < r; ++i) v.push_back(scalar());
        return v;
    };
    for (Field f : desc.schema) {
        switch (f) {
            case Field::q: p.q = scalar(true); break;
            case Field::a: p.a = scalar(); break;
            case Field::b: p.b = scalar(); break;
            case Field::c: p.c = scalar(); break;
            case Field::d: p.d = scalar(); break;
            case Field::z: p.z = scalar(); break;
            case Field::c_vec: p.c_vec = vec(); break;
            case Field::e_vec: p.e_vec = vec(); break;
            case Field::x_vec: p.x_vec = vec(); break;
            case Field::n_vec: {
                std::vector<std::int64_t> n;
                for (std::size_t i = 0; i < r; ++i) n.push_back(draw.between(0, options.max_box_entry));
                p.n_vec = MultiIndex(std::move(n));
                break;
            }
            case Field::N: p.N = draw.between(0, options.max_total); break;
        }
    }
    return p;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, IdentityId id, std::size_t r, std::size_t trial) {
    std::uint64_t h = splitmix64(seed);
    for (char ch : to_string(id)) h = splitmix64(h ^ static_cast<unsigned char>(ch));
    h = splitmix64(h ^ static_cast<std::uint64_t>(r));
    return splitmix64(h ^ static_cast<std::uint64_t>(trial));
}

ParameterAssignment sample_parameters(IdentityId id, std::size_t r, std::uint64_t seed, const NumericConfig& cfg,
                                      const SamplingOptions& options) {
    const IdentityDescriptor& desc = descriptor(id);
    if (desc.rank_one_only && r != 1) {
        throw Error(ErrorKind::Schema, std::string(to_string(id)) + " is defined for r = 1 only");
    }
    const bool dyadic = !options.backend.is_exact();
    Draw draw(seed);
    ParameterDraw pd(draw, dyadic);
    for (std::size_t attempt = 0; attempt < options.max_attempts; ++attempt) {
        ParameterAssignment p = draw_assignment(id, r, pd, draw, options);
        try {
            validate_parameters(id, p);
            const auto kernel = make_kernel(id, p, cfg);
            if (!avoids_q_powers(*kernel, p.q->rational(), reach_of(p))) continue;
            if (const auto z = kernel->argument()) {
                if (abs(z->rational()) > mpq_class(options.max_argument)) continue;
            }
        } catch (const Error&) {
            continue;
        }
        return options.backend.is_exact() ? p : p.to(options.backend);
    }
    throw Error(ErrorKind::SamplingExhausted, std::string(to_string(id)) + ": no admissible parameters after " +
                                                  std::to_string(options.max_attempts) + " attempts");
}

}  // namespace qhyper
