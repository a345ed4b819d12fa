#include <doctest.h>

#include <cmath>
#include <set>

#include "wfpp/rng.hpp"

using namespace wfpp;

TEST_SUITE("rng") {

TEST_CASE("counter draws are pure functions of their inputs") {
    CHECK(counter_bits(1, 2, 3) == counter_bits(1, 2, 3));
    CHECK(counter_bits(1, 2, 3) != counter_bits(1, 2, 4));
    CHECK(counter_bits(1, 2, 3) != counter_bits(1, 3, 3));
    CHECK(counter_bits(1, 2, 3) != counter_bits(2, 2, 3));
    CHECK(counter_uniform(7, 8, 9) == counter_uniform(7, 8, 9));
}

TEST_CASE("uniforms live in the open unit interval") {
    for (std::uint64_t c = 0; c < 20000; ++c) {
        double u = counter_uniform(42, 0, c);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("exponential rate enters only as an exact scale") {
    for (std::uint64_t c = 0; c < 50; ++c) {
        double x1 = counter_exponential(5, 11, c, 1.0);
        double x2 = counter_exponential(5, 11, c, 2.0);
        CHECK(x2 == x1 / 2.0);  // same uniform, divided rate
        CHECK(x1 > 0.0);
    }
}

TEST_CASE("exponential mean is near 1/rate") {
    double sum = 0.0;
    const int n = 40000;
    for (std::uint64_t c = 0; c < n; ++c) sum += counter_exponential(99, 1, c, 2.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("stream is sequential and counts draws") {
    CounterStream s(123, 4);
    CHECK(s.draws() == 0);
    double a = s.uniform();
    double b = s.uniform();
    CHECK(a != b);
    CHECK(s.draws() == 2);
    CHECK(s.exponential(3.0) > 0.0);
    for (int i = 0; i < 100; ++i) CHECK(s.below(10) < 10);
    CounterStream t(123, 4);
    CHECK(t.uniform() == a);
    CHECK(t.uniform() == b);
    CounterStream other(123, 5);
    CHECK(other.uniform() != a);
}

TEST_CASE("derived seeds separate replicates") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t r = 0; r < 1000; ++r) seen.insert(derive_seed(2024, r));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(2024, 0) != 2024);
}

TEST_CASE("edge keys differ across edges") {
    Edge e1(Vertex{0, 0}, 0), e2(Vertex{0, 0}, 1), e3(Vertex{1, 0}, 0);
    CHECK(edge_rng_key(e1) != edge_rng_key(e2));
    CHECK(edge_rng_key(e1) != edge_rng_key(e3));
    CHECK(edge_rng_key(e2) != edge_rng_key(e3));
}

}  // TEST_SUITE
