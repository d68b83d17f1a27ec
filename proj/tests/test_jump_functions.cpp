#include "nullshell/jump_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fd_oracle.hpp"
#include "nullshell/errors.hpp"

using namespace nullshell;
namespace nt = nullshell::testing;

namespace {

const char* kFamilyText = "4*v - 2*log(cosh(v)) - tanh(r)*exp(-v^2) - (1.1*r^2/4)*erf(r)";

void expect_same_jets(const JumpFunction& a, const JumpFunction& b, double v, std::vector<double> z,
                      double tol) {
    const Jet ja = a.jets(v, z, 4);
    const Jet jb = b.jets(v, z, 4);
    const auto ca = ja.coefficients();
    const auto cb = jb.coefficients();
    ASSERT_EQ(ca.size(), cb.size());
    for (std::size_t i = 0; i < ca.size(); ++i) EXPECT_NEAR(ca[i], cb[i], tol * std::max(1.0, std::abs(cb[i])));
}

}  // namespace

TEST(Parse, SimpleExampleMatchesBuiltin) {
    const auto parsed = parse_jump_expression("2*v - log(cosh(v))", 3);
    const auto builtin = make_example({2.0, 1.0, 0.0, 0.0}, 3);
    for (double v : {-1.5, 0.0, 0.7}) expect_same_jets(parsed, builtin, v, {0.3, -0.2}, 1e-14);
}

TEST(Parse, LinearNoShell) {
    const auto h = parse_jump_expression("v", 3);
    const Jet j = h.jets(0.4, std::vector<double>{1.0, 2.0}, 3);
    EXPECT_EQ(j.value(), 0.4);
    EXPECT_EQ(j.d(0), 1.0);
    EXPECT_EQ(j.d(1), 0.0);
    EXPECT_EQ(j.d(0, 0), 0.0);
}

TEST(Parse, FamilyStringMatchesBuiltin) {
    const auto parsed = parse_jump_expression(kFamilyText, 3);
    const auto builtin = make_example({4.0, 2.0, 1.0, 1.1}, 3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> c(-2.0, 2.0);
    for (int i = 0; i < 20; ++i) expect_same_jets(parsed, builtin, c(rng), {c(rng), c(rng)}, 1e-12);
}

TEST(Parse, UnaryMinusBindsLooserThanPower) {
    const auto h = parse_jump_expression("exp(-v^2)", 3);
    EXPECT_NEAR(h.value(1.5, std::vector<double>{0.0, 0.0}), std::exp(-2.25), 1e-15);
    EXPECT_DOUBLE_EQ(parse_jump_expression("-2^2", 2).value(0.0, std::vector<double>{0.0}), -4.0);
    EXPECT_DOUBLE_EQ(parse_jump_expression("2^-1", 2).value(0.0, std::vector<double>{0.0}), 0.5);
    EXPECT_DOUBLE_EQ(parse_jump_expression("2^3^2", 2).value(0.0, std::vector<double>{0.0}), 512.0);
}

TEST(Parse, Z1IsV) {
    const auto h = parse_jump_expression("z1 + 2*z2 + 3*z3", 3);
    EXPECT_DOUBLE_EQ(h.value(1.0, std::vector<double>{10.0, 100.0}), 1.0 + 20.0 + 300.0);
}

TEST(Parse, PiAndRealExponents) {
    const auto h = parse_jump_expression("pi*v + (1 + r^2)^1.5 + sqrt(2)", 3);
    const double z[2] = {0.6, 0.8};
    EXPECT_NEAR(h.value(2.0, z), 2.0 * M_PI + std::pow(2.0, 1.5) + std::sqrt(2.0), 1e-14);
}

TEST(Parse, Errors) {
    try {
        parse_expression("2*v +", 3);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 5u);
        EXPECT_FALSE(e.expected().empty());
    }
    try {
        parse_expression("(v + 1", 3);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 6u);
    }
    try {
        parse_expression("v $ 2", 3);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 2u);
    }
    try {
        parse_expression("v^z2", 3);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.offset(), 2u);
        EXPECT_EQ(e.expected(), std::vector<std::string>{"constant exponent"});
    }
    EXPECT_THROW(parse_expression("", 3), ParseError);
    EXPECT_THROW(parse_expression("v v", 3), ParseError);
    EXPECT_THROW(parse_expression("exp v", 3), ParseError);
    try {
        parse_expression("1 + exp(v, 2)", 3);
        FAIL();
    } catch (const ArityError& e) {
        EXPECT_EQ(e.offset(), 4u);
    }
    try {
        parse_expression("v + foo(2)", 3);
        FAIL();
    } catch (const UnknownIdentifier& e) {
        EXPECT_EQ(e.offset(), 4u);
        EXPECT_EQ(e.name(), "foo");
    }
    EXPECT_THROW(parse_expression("z4", 3), UnknownIdentifier);
    EXPECT_THROW(parse_expression("z0", 3), UnknownIdentifier);
    EXPECT_THROW(parse_expression("sin(v)", 3), UnknownIdentifier);
    EXPECT_NO_THROW(parse_expression("z4", 4));
}

TEST(Parse, RoundTripCorpus) {
    const std::vector<std::string> corpus = {
        "v",
        "2*v - log(cosh(v))",
        kFamilyText,
        "-v",
        "--v",
        "-(v + 1)",
        "(-v)^2",
        "-v^2",
        "2^-1",
        "2^3^2",
        "(2^3)^2",
        "v - (z2 - z3)",
        "v - z2 - z3",
        "v/(z2*z3)",
        "v/z2/z3",
        "v*(z2/z3)",
        "(v + z2)*(v - z2)",
        "1.5e-3*v + 2.5E+4",
        ".5*v",
        "0.1 + 0.2",
        "exp(-(v - 1)^2/2)/sqrt(2*pi)",
        "tanh(r)*exp(-v^2)",
        "erf(r)*r^2/4",
        "log(1 + v^2) - sinh(z2)*cosh(z3)",
        "sqrt(z2^2 + z3^2) - r",
        "3*v + 2*z2 + 1",
        "v - (z2^2 + z3^2)/2",
        "((v))",
        "-(-(v))",
        "v*-z2",
        "v - -z2",
        "(v - z2) - (z3 - v)",
        "exp(exp(exp(v/10)))",
        "z1*z2^2.5",
        "1/(1 + exp(-v))",
        "pi^2*v",
        "(1 + r)^-2",
        "0.30000000000000004*v",
    };
    ASSERT_GE(corpus.size(), 30u);
    for (const auto& text : corpus) {
        const ExprPtr a = parse_expression(text, 3);
        const std::string printed = to_string(*a);
        const ExprPtr b = parse_expression(printed, 3);
        EXPECT_TRUE(*a == *b) << text << " -> " << printed;
        EXPECT_EQ(to_string(*b), printed);
    }
}

TEST(Builtins, LinearIsV) {
    const auto h = make_linear({1.0, {}, 0.0}, 3);
    const Jet j = h.jets(0.5, std::vector<double>{1.0, -1.0}, 2);
    EXPECT_EQ(j.value(), 0.5);
    EXPECT_EQ(j.d(0), 1.0);
    EXPECT_EQ(j.d(1), 0.0);
    EXPECT_THROW(make_linear({0.0, {}, 0.0}, 3), ConstraintViolation);
}

TEST(Builtins, ExampleConstraints) {
    EXPECT_NO_THROW(make_example({4.0, 2.0, 1.0, 1.1}, 3));
    try {
        make_example({2.0, 2.0, 1.0, 1.1}, 3);
        FAIL();
    } catch (const ConstraintViolation& e) {
        EXPECT_EQ(e.inequality(), "a > b + c");
    }
    EXPECT_THROW(make_example({4.0, 1.0, 1.0, 1.1}, 3), ConstraintViolation);
    EXPECT_THROW(make_example({4.0, 2.0, 1.0, 0.5}, 3), ConstraintViolation);
    EXPECT_THROW(make_example({4.0, 2.0, -1.0, 1.1}, 3), ConstraintViolation);
}

TEST(Builtins, WaveRejectsVDependence) {
    EXPECT_THROW(make_wave({1.0, "v*z2"}, 3), ConstraintViolation);
    const auto h = make_wave({2.0, "(z2^2 - z3^2)/2"}, 3);
    const Jet j = h.jets(1.0, std::vector<double>{1.0, 2.0}, 2);
    EXPECT_DOUBLE_EQ(j.value(), 2.0 - 1.5);
    EXPECT_DOUBLE_EQ(j.d(1, 1), 1.0);
    EXPECT_DOUBLE_EQ(j.d(2, 2), -1.0);
}

TEST(Jets, FamilyAtVZero) {
    const auto h = make_example({4.0, 2.0, 1.0, 1.1}, 3);
    EXPECT_DOUBLE_EQ(h.jets(0.0, std::vector<double>{0.6, 0.8}, 2).d(0), 4.0);
    const auto simple = make_example({2.0, 1.0, 0.0, 0.0}, 3);
    const Jet j = simple.jets(0.0, std::vector<double>{0.0, 0.0}, 2);
    EXPECT_DOUBLE_EQ(j.d(0, 0), -1.0);
    EXPECT_DOUBLE_EQ(-j.d(0, 0) / j.d(0), 0.5);
}

TEST(Jets, FamilyNeedsPositiveRadius) {
    const auto h = make_example({4.0, 2.0, 1.0, 1.1}, 3);
    EXPECT_THROW(h.jets(0.0, std::vector<double>{0.0, 0.0}, 2), DomainError);
}

TEST(Jets, BuiltinsMatchFiniteDifferences) {
    const std::vector<JumpFunction> functions = {
        make_example({4.0, 2.0, 1.0, 1.1}, 3),
        make_wave({1.5, "exp(-r^2)*z2 + z3^3/6"}, 3),
        make_linear({2.0, {0.5, -1.0}, 3.0}, 3),
        parse_jump_expression("v*tanh(z2) + erf(v - z3)/(2 + z2^2)", 3),
    };
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> c(-1.5, 1.5);
    const auto indices = nt::multi_indices(3, 4);
    for (const auto& h : functions) {
        for (int trial = 0; trial < 100; ++trial) {
            // Polar sampling keeps r in [0.8, 2], away from the r = 0 kink.
            const double r = 0.8 + 1.2 * std::abs(c(rng)) / 1.5;
            const double phi = 2.0 * c(rng);
            double x[3] = {c(rng), r * std::cos(phi), r * std::sin(phi)};
            const Jet j = h.jets(x[0], std::span<const double>(x + 1, 2), 4);
            auto plain = [&h](std::span<const double> p) { return h.value(p[0], p.subspan(1)); };
            for (const auto& m : indices) {
                const double fd = nt::fd_partial_refined(plain, x, m);
                ASSERT_NEAR(j.partial(m), fd, 1e-6 * std::max(1.0, std::abs(fd)))
                    << h.description() << " at " << x[0] << "," << x[1] << "," << x[2] << " index " << m[0] << m[1] << m[2];
            }
        }
    }
}

TEST(FromPressure, ZeroPressureGivesLinear) {
    PressureProfile prof;
    prof.p = [](const Jet& v, std::span<const Jet>) { return 0.0 * v; };
    prof.beta = [](std::span<const Jet>) { return Jet(1.0); };
    const auto h = from_pressure(prof, {-1.0, 2.0, 0.05}, 3);
    const Jet j = h.jets(1.3, std::vector<double>{0.2, 0.1}, 3);
    EXPECT_NEAR(j.value(), 1.3 - (-1.0), 1e-14);
    EXPECT_NEAR(j.d(0), 1.0, 1e-14);
    EXPECT_NEAR(j.d(0, 0), 0.0, 1e-14);
    EXPECT_NEAR(j.d(1), 0.0, 1e-14);
}

TEST(FromPressure, ConstantPressureIsExponential) {
    const double k = 0.7;
    PressureProfile prof;
    prof.p = [k](const Jet& v, std::span<const Jet>) { return k + 0.0 * v; };
    prof.beta = [](std::span<const Jet>) { return Jet(1.0); };
    const double v0 = -1.0;
    const auto h = from_pressure(prof, {v0, 3.0, 0.01}, 2);
    for (double v : {-1.0, -0.3, 0.5, 2.9}) {
        const Jet j = h.jets(v, std::vector<double>{0.4}, 4);
        const double w = std::exp(-k * (v - v0));
        EXPECT_NEAR(j.d(0), w, 1e-10) << v;
        EXPECT_NEAR(j.value(), (1.0 - w) / k, 1e-10) << v;
        EXPECT_NEAR(-j.d(0, 0) / j.d(0), k, 1e-12);
        EXPECT_NEAR(j.d({0, 0, 0, 0}), -k * k * k * w, 1e-10);
    }
}

TEST(FromPressure, ReconstructsSimpleExample) {
    const double a = 2.0;
    const double b = 1.0;
    const double v0 = -3.0;
    PressureProfile prof;
    prof.p = [a, b](const Jet& v, std::span<const Jet>) {
        const Jet ch = cosh(v);
        return b / (ch * ch) / (a - b * tanh(v));
    };
    prof.beta = [a, b, v0](std::span<const Jet>) { return Jet(a - b * std::tanh(v0)); };
    prof.offset = [a, b, v0](std::span<const Jet>) { return Jet(a * v0 - b * std::log(std::cosh(v0))); };
    const auto h = from_pressure(prof, {v0, 3.0, 0.01}, 3);
    const auto exact = make_example({a, b, 0.0, 0.0}, 3);
    for (double v : {-2.5, -0.4, 0.0, 1.1, 3.0}) expect_same_jets(h, exact, v, {0.2, 0.3}, 1e-8);
}

TEST(FromPressure, ReconstructsFamilyWithSpatialJets) {
    const ExampleParams q{4.0, 2.0, 1.0, 1.1};
    const auto exact = make_example(q, 3);
    const double v0 = -3.0;
    // p = -d_v^2 H / d_v H of the family, written in closed form.
    PressureProfile prof;
    prof.p = [q](const Jet& v, std::span<const Jet> z) {
        const Jet r = sqrt(z[0] * z[0] + z[1] * z[1]);
        const Jet g = exp(-(v * v));
        const Jet ch = cosh(v);
        const Jet dv = q.a - q.b * tanh(v) + 2.0 * q.c * v * tanh(r) * g;
        return (q.b / (ch * ch) + 2.0 * q.c * tanh(r) * g * (2.0 * v * v - 1.0)) / dv;
    };
    prof.beta = [q, v0](std::span<const Jet> z) {
        const Jet r = sqrt(z[0] * z[0] + z[1] * z[1]);
        return q.a - q.b * std::tanh(v0) + 2.0 * q.c * v0 * tanh(r) * std::exp(-v0 * v0);
    };
    prof.offset = [exact, v0](std::span<const Jet> z) {
        return exact.evaluate(Jet::constant(v0, z[0].nvars(), z[0].order()), z);
    };
    const auto h = from_pressure(prof, {v0, 3.0, 0.01}, 3);
    for (double v : {-1.0, 0.0, 0.8, 2.5}) expect_same_jets(h, exact, v, {0.5, 0.7}, 1e-8);
}

TEST(FromPressure, Errors) {
    PressureProfile prof;
    prof.p = [](const Jet& v, std::span<const Jet>) { return 0.0 * v; };
    prof.beta = [](std::span<const Jet>) { return Jet(-1.0); };
    const auto bad = from_pressure(prof, {0.0, 1.0, 0.1}, 2);
    EXPECT_THROW(bad.jets(0.5, std::vector<double>{0.0}, 2), NonPositiveDerivative);

    PressureProfile stiff;
    stiff.p = [](const Jet& v, std::span<const Jet>) { return 40.0 + 0.0 * v; };
    stiff.beta = [](std::span<const Jet>) { return Jet(1.0); };
    const auto coarse = from_pressure(stiff, {0.0, 1.0, 0.5}, 2);
    EXPECT_THROW(coarse.jets(1.0, std::vector<double>{0.0}, 2), StepSizeError);
    EXPECT_THROW(coarse.jets(1.5, std::vector<double>{0.0}, 2), DomainError);
}

TEST(Admissibility, Reports) {
    std::vector<LeafPoint> grid;
    for (int i = 0; i <= 60; ++i)
        for (double r : {0.5, 1.0, 2.0}) grid.push_back({-3.0 + 0.1 * i, {r, 0.0}});
    const auto lin = check_admissibility(parse_jump_expression("v", 3), grid);
    EXPECT_TRUE(lin.pass);
    EXPECT_DOUBLE_EQ(lin.min_dvH, 1.0);
    const auto fam = check_admissibility(make_example({4.0, 2.0, 1.0, 1.1}, 3), grid);
    EXPECT_TRUE(fam.pass);
    EXPECT_GE(fam.min_dvH, 1.0);
    const auto neg = check_admissibility(parse_jump_expression("-v", 3), grid);
    EXPECT_FALSE(neg.pass);
    EXPECT_DOUBLE_EQ(neg.min_dvH, -1.0);
    EXPECT_EQ(neg.points, grid.size());
}
