#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fglnh/nilhecke.hpp"
#include "fglnh/parse.hpp"

using namespace fglnh;

namespace {

mpq_class random_rational(std::mt19937& rng) {
    std::uniform_int_distribution<int> numd(-8, 8), dend(1, 8);
    mpq_class q(numd(rng), dend(rng));
    q.canonicalize();
    return q;
}

// Pseudo-random formal group law: a rational specialization of the free
// log-coefficient family, over the plain rational ring (ungraded).
FormalGroupLaw random_fgl(std::mt19937& rng, int trunc, int nparams = 4) {
    FormalGroupLaw uni =
        FormalGroupLaw::catalog("universal_rational(" + std::to_string(nparams) + ")", trunc);
    RingPtr target = rational_ring(false);
    std::map<std::string, Coeff> bind;
    for (const Param& p : uni.ring()->params)
        bind.emplace(p.name, Coeff::rational(target, random_rational(rng)));
    return uni.specialize(bind, target, "random");
}

TruncSeries random_series(const RingPtr& ring, int nvars, int trunc, std::mt19937& rng) {
    std::uniform_int_distribution<int> expd(0, 2), nterms(1, 5);
    TruncSeries s(ring, nvars, trunc);
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        std::vector<int> exps;
        for (int i = 0; i < nvars; ++i) exps.push_back(expd(rng));
        s.add_term(exps, Coeff::rational(ring, random_rational(rng)));
    }
    return s;
}

}  // namespace

TEST_CASE("inverse is an involution on random formal group laws") {
    std::mt19937 rng(9001);
    for (int trial = 0; trial < 100; ++trial) {
        FormalGroupLaw fgl = random_fgl(rng, 6);
        TruncSeries x = TruncSeries::variable(fgl.ring(), 1, 1, 6);
        TruncSeries twice = fgl.inverse().substitute({fgl.inverse()});
        CHECK(twice.equal_upto(x, twice.valid_order()));
    }
}

TEST_CASE("exp and log round-trip on random formal group laws") {
    std::mt19937 rng(9002);
    for (int trial = 0; trial < 100; ++trial) {
        FormalGroupLaw fgl = random_fgl(rng, 6);
        TruncSeries x = TruncSeries::variable(fgl.ring(), 1, 1, 6);
        TruncSeries a = fgl.log().substitute({fgl.exp()});
        CHECK(a.equal_upto(x, a.valid_order()));
    }
}

TEST_CASE("difference unit certifies u*(x - y) = F(x, inv(y))") {
    std::mt19937 rng(9003);
    for (int trial = 0; trial < 100; ++trial) {
        FormalGroupLaw fgl = random_fgl(rng, 6);
        TruncSeries x = TruncSeries::variable(fgl.ring(), 2, 1, 6);
        TruncSeries y = TruncSeries::variable(fgl.ring(), 2, 2, 6);
        TruncSeries diff = fgl.F().substitute({x, fgl.inverse().embed(2, {2})});
        TruncSeries back = fgl.diff_unit() * (x - y);
        CHECK(back.equal_upto(diff, back.valid_order()));
    }
}

TEST_CASE("genus and log determine each other") {
    std::mt19937 rng(9004);
    for (int trial = 0; trial < 100; ++trial) {
        FormalGroupLaw fgl = random_fgl(rng, 7);
        std::vector<Coeff> table = fgl.genus(5);
        for (int n = 0; n <= 5; ++n) {
            Coeff mn = fgl.log().coeff({n + 1});
            CHECK(table[n] == mn * mpq_class(n + 1));
        }
    }
}

TEST_CASE("difference-fraction normalization is idempotent") {
    std::mt19937 rng(9005);
    RingPtr ring = rational_ring(false);
    std::uniform_int_distribution<int> pick(1, 3), mult(0, 2);
    for (int trial = 0; trial < 150; ++trial) {
        DiffFraction df(random_series(ring, 3, 6, rng));
        for (int f = 0; f < 3; ++f) {
            int a = pick(rng), b = pick(rng);
            if (a != b && mult(rng) > 0) df.push_factor(a, b);
        }
        DiffFraction n1 = df.normalized();
        DiffFraction n2 = n1.normalized();
        CHECK(n1.num().to_string() == n2.num().to_string());
        CHECK(n1.denom() == n2.denom());
    }
}

TEST_CASE("swap-invariant series are eigenvectors: del_i f = s*f") {
    std::mt19937 rng(9006);
    for (int trial = 0; trial < 100; ++trial) {
        FormalGroupLaw fgl = random_fgl(rng, 8);
        Generators gens = build_generators(fgl, 2, 8);
        auto [s, t] = deformation_st(fgl);
        TruncSeries g = random_series(fgl.ring(), 2, 3, rng);
        TruncSeries f = g + g.swap_vars(1);  // symmetric by construction
        TruncSeries lhs = gens.del[0].apply(f);
        TruncSeries rhs = s * f;
        int upto = std::min(lhs.valid_order(), rhs.valid_order());
        CHECK(lhs.equal_upto(rhs, upto));
    }
}

TEST_CASE("operator composition acts as composition of actions") {
    std::mt19937 rng(9007);
    FormalGroupLaw fgl = FormalGroupLaw::catalog("chi", 10);
    Generators gens = build_generators(fgl, 3, 10);
    std::uniform_int_distribution<int> pick(0, 4);
    auto choose = [&](int k) -> const TwistedOperator& {
        switch (k) {
            case 0: return gens.x[0];
            case 1: return gens.x[1];
            case 2: return gens.x[2];
            case 3: return gens.del[0];
            default: return gens.del[1];
        }
    };
    for (int trial = 0; trial < 100; ++trial) {
        const TwistedOperator& A = choose(pick(rng));
        const TwistedOperator& B = choose(pick(rng));
        TruncSeries f = random_series(fgl.ring(), 3, 4, rng);
        TruncSeries via_compose = A.compose(B).apply(f);
        TruncSeries via_actions = A.apply(B.apply(f));
        int upto = std::min(via_compose.valid_order(), via_actions.valid_order());
        CHECK(via_compose.equal_upto(via_actions, upto));
    }
}

TEST_CASE("deformation series of random laws verify all relations") {
    std::mt19937 rng(9008);
    for (int trial = 0; trial < 5; ++trial) {
        FormalGroupLaw fgl = random_fgl(rng, 8);
        VerifyReport report = verify_presentation(fgl, 3, 8);
        CHECK(report.all_pass());
    }
}

TEST_CASE("specializing the free family commutes with deformation") {
    std::mt19937 rng(9009);
    FormalGroupLaw uni = FormalGroupLaw::catalog("universal_rational(3)", 8);
    auto [su, tu] = deformation_st(uni);
    for (int trial = 0; trial < 20; ++trial) {
        RingPtr target = rational_ring(false);
        std::map<std::string, Coeff> bind;
        for (const Param& p : uni.ring()->params)
            bind.emplace(p.name, Coeff::rational(target, random_rational(rng)));
        FormalGroupLaw special = uni.specialize(bind, target, "special");
        auto [ss, ts] = deformation_st(special);
        TruncSeries su_spec = su.specialize_coeffs(bind, target);
        TruncSeries tu_spec = tu.specialize_coeffs(bind, target);
        CHECK(ss.equal_upto(su_spec, std::min(ss.valid_order(), su_spec.valid_order())));
        CHECK(ts.equal_upto(tu_spec, std::min(ts.valid_order(), tu_spec.valid_order())));
    }
}
