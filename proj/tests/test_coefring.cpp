#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "fglnh/coefring.hpp"

using namespace fglnh;

namespace {

RingPtr test_ring() {
    return make_ring({Param{"a", -2}, Param{"b", -4}});
}

Coeff random_coeff(const RingPtr& ring, std::mt19937& rng) {
    std::uniform_int_distribution<int> nterms(0, 4), expd(0, 3), numd(-9, 9), dend(1, 9);
    Coeff c(ring);
    int k = nterms(rng);
    for (int t = 0; t < k; ++t) {
        std::vector<int> exps;
        for (size_t i = 0; i < ring->params.size(); ++i) exps.push_back(expd(rng));
        mpq_class q(numd(rng), dend(rng));
        q.canonicalize();
        c = c + Coeff::from_terms(ring, {{exps, q}});
    }
    return c;
}

}  // namespace

TEST_CASE("ring construction validates parameters") {
    CHECK_NOTHROW(make_ring({Param{"a", -2}}));
    CHECK_THROWS_AS(make_ring({Param{"a", -3}}), Error);  // odd degree, graded
    CHECK_NOTHROW(make_ring({Param{"a", -3}}, false));
    CHECK_THROWS_AS(make_ring({Param{"a", -2}, Param{"a", -4}}), Error);
    RingPtr r = test_ring();
    CHECK(r->index_of("b") == 1);
    CHECK(r->index_of("c") == -1);
    CHECK_THROWS_AS(Coeff::parameter(r, "c"), Error);
}

TEST_CASE("rational formatting round-trips") {
    CHECK(format_rational(mpq_class(3, 4)) == "3/4");
    CHECK(format_rational(mpq_class(-5)) == "-5");
    CHECK(parse_rational("3/4") == mpq_class(3, 4));
    CHECK(parse_rational("-7") == mpq_class(-7));
    CHECK_THROWS_AS(parse_rational("x"), ParseError);
}

TEST_CASE("ring axioms hold on random triples") {
    RingPtr ring = test_ring();
    std::mt19937 rng(20240801);
    for (int trial = 0; trial < 200; ++trial) {
        Coeff a = random_coeff(ring, rng);
        Coeff b = random_coeff(ring, rng);
        Coeff c = random_coeff(ring, rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Coeff(ring));
    }
}

TEST_CASE("nilpotent exponents truncate on construction") {
    RingPtr ring = make_ring({Param{"e", -2, 2}});
    Coeff e = Coeff::parameter(ring, "e");
    CHECK((e * e).is_zero());
    CHECK_FALSE(e.is_zero());
    RingPtr cubed = make_ring({Param{"e", -2, 3}});
    Coeff f = Coeff::parameter(cubed, "e");
    CHECK_FALSE((f * f).is_zero());
    CHECK((f * f * f).is_zero());
}

TEST_CASE("degree-zero inversion via the nilpotent geometric series") {
    RingPtr ring = make_ring({Param{"e", 0, 3}}, false);
    Coeff u = Coeff::rational(ring, 2) + Coeff::parameter(ring, "e");
    Coeff inv = u.invert_degree_zero();
    CHECK(u * inv == Coeff::rational(ring, 1));
    CHECK_THROWS_AS(Coeff(ring).invert_degree_zero(), NotInvertible);
    // Free parameter tail is not nilpotent.
    RingPtr freering = make_ring({Param{"a", 0}}, false);
    Coeff v = Coeff::rational(freering, 1) + Coeff::parameter(freering, "a");
    CHECK_THROWS_AS(v.invert_degree_zero(), NotInvertible);
    // Graded rings demand homogeneous degree 0.
    RingPtr graded = test_ring();
    CHECK_THROWS_AS(Coeff::parameter(graded, "a").invert_degree_zero(), NotDegreeZero);
}

TEST_CASE("homogeneity bookkeeping") {
    RingPtr ring = test_ring();
    Coeff a = Coeff::parameter(ring, "a");
    Coeff b = Coeff::parameter(ring, "b");
    CHECK(a.is_homogeneous(-2));
    CHECK((a * a).is_homogeneous(-4));
    CHECK((a * a + b).is_homogeneous(-4));
    CHECK_FALSE((a + b).is_homogeneous(-2));
    CHECK(Coeff(ring).is_homogeneous(-2));
    CHECK(Coeff(ring).is_homogeneous(0));
    CHECK((a * b).homogeneous_degree() == -6);
    CHECK_FALSE((a + b).homogeneous_degree().has_value());
}

TEST_CASE("specialization is a ring homomorphism") {
    RingPtr ring = test_ring();
    RingPtr target = rational_ring(false);
    std::map<std::string, Coeff> bind = {
        {"a", Coeff::rational(target, mpq_class(1, 2))},
        {"b", Coeff::rational(target, -3)},
    };
    std::mt19937 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        Coeff x = random_coeff(ring, rng);
        Coeff y = random_coeff(ring, rng);
        CHECK((x * y).specialize(bind, target) ==
              x.specialize(bind, target) * y.specialize(bind, target));
        CHECK((x + y).specialize(bind, target) ==
              x.specialize(bind, target) + y.specialize(bind, target));
    }
    // Unbound parameters must exist in the target.
    CHECK_THROWS_AS(Coeff::parameter(ring, "a").specialize({}, target), MismatchedRings);
}

TEST_CASE("split_linear separates the dual-number part") {
    RingPtr base = test_ring();
    RingPtr ext = extend_ring(base, {Param{"e", 0, 2}});
    Coeff a = Coeff::parameter(ext, "a");
    Coeff e = Coeff::parameter(ext, "e");
    Coeff mixed = a + a * a * e;
    auto [c0, c1] = mixed.split_linear("e", base);
    CHECK(c0 == Coeff::parameter(base, "a"));
    CHECK(c1 == Coeff::parameter(base, "a") * Coeff::parameter(base, "a"));
}

TEST_CASE("canonical text form") {
    RingPtr ring = test_ring();
    Coeff a = Coeff::parameter(ring, "a");
    Coeff b = Coeff::parameter(ring, "b");
    CHECK(Coeff(ring).to_string() == "0");
    CHECK(Coeff::rational(ring, mpq_class(-1, 3)).to_string() == "-1/3");
    CHECK((a * a * mpq_class(2) - b).to_string() == "-b + 2*a^2");
}
