#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "liejet/models.hpp"
#include "liejet/tape.hpp"

using namespace liejet;

TEST_CASE("record and evaluate a small program") {
    CodeList cl = record(2, [](const std::vector<Tracer>& x) {
        std::vector<Tracer> y;
        y.push_back(x[0] * x[1] + 3.0);
        y.push_back(sin(x[0]) / x[1]);
        return y;
    });
    CHECK(cl.n_inputs() == 2);
    auto y = eval(cl, {0.7, 2.0});
    CHECK(y[0] == doctest::Approx(0.7 * 2.0 + 3.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(std::sin(0.7) / 2.0).epsilon(1e-15));
}

TEST_CASE("record-time constant folding and pooling") {
    CodeList cl = record(1, [](const std::vector<Tracer>& x) {
        Tracer a = Tracer(2.0) * Tracer(3.0);  // folds to 6 before taping
        Tracer b = x[0] + 5.0;
        Tracer c = x[0] + 5.0;  // 5 pools with the previous 5
        return std::vector<Tracer>{a + b + c};
    });
    // folded product leaves a single 6 and one pooled 5 in the table
    CHECK(cl.constants().size() == 2);
    auto y = eval(cl, {1.0});
    CHECK(y[0] == doctest::Approx(18.0).epsilon(1e-15));
}

TEST_CASE("comparisons and non-smooth functions refuse to tape") {
    auto rec = [](auto body) {
        return [body] { record(1, [body](const std::vector<Tracer>& x) {
            return std::vector<Tracer>{body(x[0])}; }); };
    };
    CHECK_THROWS_AS(rec([](const Tracer& t) { return t < t ? t : t; })(), UnsupportedOperation);
    CHECK_THROWS_AS(rec([](const Tracer& t) { return abs(t); })(), UnsupportedOperation);
    CHECK_THROWS_AS(rec([](const Tracer& t) { return max(t, t); })(), UnsupportedOperation);
}

TEST_CASE("x' = x: coefficients c/k!") {
    CodeList cl = record(1, [](const std::vector<Tracer>& x) {
        return std::vector<Tracer>{x[0]};
    });
    const double c = 1.75;
    auto g = taylcoeffs(cl, std::vector<double>{c}, 8);
    double fact = 1.0;
    for (int k = 0; k <= 8; ++k) {
        if (k > 0) fact *= double(k);
        CHECK(g.x[std::size_t(k)][0] == doctest::Approx(c / fact).epsilon(1e-15));
    }
}

TEST_CASE("harmonic oscillator: x'' = -x gives sin/cos coefficients") {
    CodeList cl = record(2, [](const std::vector<Tracer>& x) {
        return std::vector<Tracer>{x[1], -x[0]};
    });
    // x(0) = 0, x'(0) = 1 -> x(t) = sin t, y(t) = cos t
    auto g = taylcoeffs(cl, std::vector<double>{0.0, 1.0}, 11);
    double fact = 1.0;
    for (int k = 0; k <= 11; ++k) {
        if (k > 0) fact *= double(k);
        const double sk = (k % 2 == 0) ? 0.0 : ((k / 2) % 2 ? -1.0 : 1.0) / fact;
        const double ck = (k % 2 == 1) ? 0.0 : ((k / 2) % 2 ? -1.0 : 1.0) / fact;
        CHECK(g.x[std::size_t(k)][0] == doctest::Approx(sk).epsilon(1e-15));
        CHECK(g.x[std::size_t(k)][1] == doctest::Approx(ck).epsilon(1e-15));
    }
}

TEST_CASE("gantry tape matches direct formula evaluation") {
    GantryParams P;
    CodeList cl = gantry_tape(P);
    const std::vector<double> x0 = gantry_x0();
    auto taped = eval(cl, x0);
    auto direct = gantry_f(x0, P);
    REQUIRE(taped.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(taped[i] == doctest::Approx(direct[i]).epsilon(1e-15));
    // equilibrium: the zero state maps to the zero field
    auto eq = eval(cl, {0.0, 0.0, 0.0, 0.0});
    for (double v : eq) CHECK(v == 0.0);
}

TEST_CASE("flow residual: f_k = (k+1) x_{k+1} on the gantry") {
    GantryParams P;
    CodeList cl = gantry_tape(P);
    const int p = 10;
    auto g = taylcoeffs(cl, gantry_x0(), p);

    // re-evaluate f on the completed series and compare order by order
    std::vector<std::vector<double>> in(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (int k = 0; k <= p; ++k) in[i].push_back(g.x[std::size_t(k)][i]);
    auto f = interpret(cl, in);

    for (int k = 0; k < p; ++k) {
        double num = 0, den = 1.0;
        for (std::size_t i = 0; i < 4; ++i) {
            num = std::max(num, std::fabs(f[i][std::size_t(k)] -
                                          double(k + 1) * g.x[std::size_t(k) + 1][i]));
            den = std::max(den, std::fabs(f[i][std::size_t(k)]));
        }
        CHECK(num / den <= 1e-13);
    }
}

TEST_CASE("truncation consistency: lower order is a prefix") {
    GantryParams P;
    CodeList cl = gantry_tape(P);
    auto full = taylcoeffs(cl, gantry_x0(), 10);
    auto part = taylcoeffs(cl, gantry_x0(), 6);
    for (int k = 0; k <= 6; ++k)
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(part.x[std::size_t(k)][i] == full.x[std::size_t(k)][i]);
}

TEST_CASE("determinism: repeated runs are bit-identical") {
    GantryParams P;
    CodeList cl1 = gantry_tape(P);
    CodeList cl2 = gantry_tape(P);
    auto a = taylcoeffs(cl1, gantry_x0(), 12, true);
    auto b = taylcoeffs(cl2, gantry_x0(), 12, true);
    for (int k = 0; k <= 12; ++k) {
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(a.x[std::size_t(k)][i] == b.x[std::size_t(k)][i]);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                CHECK(a.grads[std::size_t(k)](i, j) == b.grads[std::size_t(k)](i, j));
    }
}

TEST_CASE("propagated Jacobian: J_0 = I exactly, FD agreement for k <= 5") {
    GantryParams P;
    CodeList cl = gantry_tape(P);
    auto g = taylcoeffs(cl, gantry_x0(), 5, true);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            CHECK(g.grads[0](i, j) == (i == j ? 1.0 : 0.0));
    auto rep = finite_difference_jacobian_check(cl, gantry_x0(), 5);
    CHECK(rep.max_rel <= 1e-6);
}

TEST_CASE("propagated Jacobian matches the A-coefficient recurrence") {
    // independent path: J_{k+1} = (1/(k+1)) sum_i A_{k-i} J_i with the A_i
    // obtained by forward-mode duals along the computed state series
    GantryParams P;
    CodeList cl = gantry_tape(P);
    const int p = 10;
    auto g = taylcoeffs(cl, gantry_x0(), p, true);
    auto a = field_jacobian_coeffs(cl, g.state_series());
    std::vector<Mat<double>> j{Mat<double>::identity(4)};
    for (int k = 0; k + 1 <= p; ++k) {
        Mat<double> s(4, 4);
        for (int i = 0; i <= k; ++i) s = s + a[std::size_t(k - i)] * j[std::size_t(i)];
        j.push_back((1.0 / double(k + 1)) * s);
    }
    for (int k = 0; k <= p; ++k) {
        double num = 0, den = 1.0;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) {
                num = std::max(num, std::fabs(g.grads[std::size_t(k)](r, c) -
                                              j[std::size_t(k)](r, c)));
                den = std::max(den, std::fabs(j[std::size_t(k)](r, c)));
            }
        CHECK(num / den <= 1e-12);
    }
}

TEST_CASE("pow at record time: integer exponents avoid the u0 > 0 domain") {
    CodeList cl = record(1, [](const std::vector<Tracer>& x) {
        return std::vector<Tracer>{pow(x[0], 3.0)};
    });
    auto y = eval(cl, {-2.0});
    CHECK(y[0] == doctest::Approx(-8.0).epsilon(1e-15));
    // non-integer exponent on a negative point fails at interpret time
    CodeList cl2 = record(1, [](const std::vector<Tracer>& x) {
        return std::vector<Tracer>{pow(x[0], 0.5)};
    });
    CHECK_THROWS_AS(eval(cl2, {-2.0}), DomainError);
}

TEST_CASE("interpretation errors carry context") {
    CodeList cl = record(1, [](const std::vector<Tracer>& x) {
        return std::vector<Tracer>{log(x[0])};
    });
    CHECK_THROWS_AS(eval(cl, {-1.0}), DomainError);
    CodeList cldiv = record(2, [](const std::vector<Tracer>& x) {
        return std::vector<Tracer>{x[0] / x[1], x[1]};
    });
    std::vector<std::vector<double>> in{{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(interpret(cldiv, in), DivisionByZeroConstantTerm);
}

TEST_CASE("nonfinite coefficients are detected during propagation") {
    // x' = x^2 from a large start overflows within a few orders... make it
    // immediate: x' = exp(x) at a start whose exp overflows
    CodeList cl = record(1, [](const std::vector<Tracer>& x) {
        return std::vector<Tracer>{exp(x[0])};
    });
    CHECK_THROWS_AS(taylcoeffs(cl, std::vector<double>{800.0}, 3), NonFiniteCoefficient);
}
