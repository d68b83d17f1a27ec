#include "nullshell/jump_functions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "nullshell/errors.hpp"

namespace nullshell {

// ----------------------------------------------------------------------------
// Expression trees
// ----------------------------------------------------------------------------

bool Expr::depends_on_v() const {
    if (kind == Kind::variable) return name == "v" || name == "z1";
    return std::any_of(args.begin(), args.end(), [](const ExprPtr& a) { return a->depends_on_v(); });
}

bool Expr::is_constant() const {
    if (kind == Kind::variable) return name == "pi";
    return std::all_of(args.begin(), args.end(), [](const ExprPtr& a) { return a->is_constant(); });
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size()) return false;
    if (a.kind == Expr::Kind::number && !(a.number == b.number)) return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!(*a.args[i] == *b.args[i])) return false;
    return true;
}

namespace {

const std::set<std::string>& function_names() {
    static const std::set<std::string> names = {"exp", "log", "cosh", "sinh", "tanh", "erf", "sqrt"};
    return names;
}

// Spatial slot of a zK identifier (z2 -> 0), -1 for z1 (= v), or nothing if malformed.
std::optional<int> z_slot(const std::string& name, int dim_n) {
    if (name.size() < 2 || name[0] != 'z' || name[1] == '0') return std::nullopt;
    int k = 0;
    const auto* first = name.data() + 1;
    const auto* last = name.data() + name.size();
    const auto res = std::from_chars(first, last, k);
    if (res.ec != std::errc() || res.ptr != last || k < 1 || k > dim_n) return std::nullopt;
    return k - 2;
}

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    double number = 0.0;
    std::size_t offset = 0;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = s.size();
    auto is_digit = [](char c) { return c >= '0' && c <= '9'; };
    auto is_alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    while (i < n) {
        const char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        Token t;
        t.offset = i;
        if (is_digit(c) || (c == '.' && i + 1 < n && is_digit(s[i + 1]))) {
            std::size_t j = i;
            while (j < n && is_digit(s[j])) ++j;
            if (j < n && s[j] == '.') {
                ++j;
                while (j < n && is_digit(s[j])) ++j;
            }
            if (j < n && (s[j] == 'e' || s[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < n && (s[k] == '+' || s[k] == '-')) ++k;
                if (k < n && is_digit(s[k])) {
                    while (k < n && is_digit(s[k])) ++k;
                    j = k;
                }
            }
            t.kind = Tok::number;
            t.text = s.substr(i, j - i);
            const auto res = std::from_chars(s.data() + i, s.data() + j, t.number);
            if (res.ec != std::errc() || res.ptr != s.data() + j || !std::isfinite(t.number)) {
                throw ParseError(i, {"finite number"}, t.text);
            }
            i = j;
        } else if (is_alpha(c)) {
            std::size_t j = i;
            while (j < n && (is_alpha(s[j]) || is_digit(s[j]))) ++j;
            t.kind = Tok::ident;
            t.text = s.substr(i, j - i);
            i = j;
        } else {
            t.text = std::string(1, c);
            switch (c) {
                case '+': t.kind = Tok::plus; break;
                case '-': t.kind = Tok::minus; break;
                case '*': t.kind = Tok::star; break;
                case '/': t.kind = Tok::slash; break;
                case '^': t.kind = Tok::caret; break;
                case '(': t.kind = Tok::lparen; break;
                case ')': t.kind = Tok::rparen; break;
                case ',': t.kind = Tok::comma; break;
                default: throw ParseError(i, {"number", "identifier", "operator"}, t.text);
            }
            ++i;
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::end;
    end.offset = n;
    out.push_back(end);
    return out;
}

ExprPtr make_node(Expr::Kind kind, std::size_t offset, std::vector<ExprPtr> args, std::string name = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->offset = offset;
    e->args = std::move(args);
    e->name = std::move(name);
    return e;
}

class Parser {
public:
    Parser(const std::string& text, int dim_n) : tokens_(lex(text)), dim_n_(dim_n) {}

    ExprPtr parse() {
        if (peek().kind == Tok::end) throw ParseError(0, primary_expected(), "");
        ExprPtr e = expr();
        if (peek().kind != Tok::end) {
            throw ParseError(peek().offset, {"operator", "end of input"}, peek().text);
        }
        return e;
    }

private:
    static std::vector<std::string> primary_expected() { return {"number", "identifier", "'('", "'-'"}; }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& next() { return tokens_[pos_++]; }

    ExprPtr expr() {
        ExprPtr lhs = term();
        while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
            const Token& op = next();
            ExprPtr rhs = term();
            lhs = make_node(op.kind == Tok::plus ? Expr::Kind::add : Expr::Kind::sub, op.offset, {lhs, rhs});
        }
        return lhs;
    }

    ExprPtr term() {
        ExprPtr lhs = factor();
        while (peek().kind == Tok::star || peek().kind == Tok::slash) {
            const Token& op = next();
            ExprPtr rhs = factor();
            lhs = make_node(op.kind == Tok::star ? Expr::Kind::mul : Expr::Kind::div, op.offset, {lhs, rhs});
        }
        return lhs;
    }

    ExprPtr factor() {
        if (peek().kind == Tok::minus) {
            const Token& op = next();
            return make_node(Expr::Kind::negate, op.offset, {factor()});
        }
        ExprPtr base = primary();
        if (peek().kind == Tok::caret) {
            const Token& op = next();
            const std::size_t exp_offset = peek().offset;
            const std::string exp_text = peek().text;
            ExprPtr exponent = factor();
            if (!exponent->is_constant()) throw ParseError(exp_offset, {"constant exponent"}, exp_text);
            return make_node(Expr::Kind::pow, op.offset, {base, exponent});
        }
        return base;
    }

    ExprPtr primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::number: {
                next();
                auto e = std::make_shared<Expr>();
                e->kind = Expr::Kind::number;
                e->number = t.number;
                e->offset = t.offset;
                return e;
            }
            case Tok::lparen: {
                next();
                ExprPtr inner = expr();
                if (peek().kind != Tok::rparen) throw ParseError(peek().offset, {"')'", "operator"}, peek().text);
                next();
                return inner;
            }
            case Tok::ident: return identifier();
            default: throw ParseError(t.offset, primary_expected(), t.text);
        }
    }

    ExprPtr identifier() {
        const Token& t = next();
        if (function_names().count(t.text)) {
            if (peek().kind != Tok::lparen) throw ParseError(peek().offset, {"'('"}, peek().text);
            next();
            std::vector<ExprPtr> args{expr()};
            while (peek().kind == Tok::comma) {
                next();
                args.push_back(expr());
            }
            if (peek().kind != Tok::rparen) throw ParseError(peek().offset, {"','", "')'", "operator"}, peek().text);
            next();
            if (args.size() != 1) throw ArityError(t.offset, t.text, 1, args.size());
            return make_node(Expr::Kind::call, t.offset, std::move(args), t.text);
        }
        if (t.text == "v" || t.text == "r" || t.text == "pi" || z_slot(t.text, dim_n_)) {
            return make_node(Expr::Kind::variable, t.offset, {}, t.text);
        }
        throw UnknownIdentifier(t.offset, t.text);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    int dim_n_;
};

int level(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::add:
        case Expr::Kind::sub: return 1;
        case Expr::Kind::mul:
        case Expr::Kind::div: return 2;
        case Expr::Kind::negate: return 3;
        case Expr::Kind::pow: return 4;
        case Expr::Kind::number: return std::signbit(e.number) ? 0 : 5;
        default: return 5;
    }
}

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void render(const Expr& e, std::string& out);

void render_child(const Expr& child, bool parens, std::string& out) {
    if (parens) out += '(';
    render(child, out);
    if (parens) out += ')';
}

void render(const Expr& e, std::string& out) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::number: out += format_number(e.number); return;
        case K::variable: out += e.name; return;
        case K::call:
            out += e.name;
            out += '(';
            render(*e.args[0], out);
            out += ')';
            return;
        case K::negate:
            out += '-';
            render_child(*e.args[0], level(*e.args[0]) < 3, out);
            return;
        case K::pow:
            render_child(*e.args[0], level(*e.args[0]) < 5, out);
            out += '^';
            render_child(*e.args[1], level(*e.args[1]) < 3, out);
            return;
        default: break;
    }
    const int lv = level(e);
    const char* op = e.kind == K::add ? " + " : e.kind == K::sub ? " - " : e.kind == K::mul ? "*" : "/";
    render_child(*e.args[0], level(*e.args[0]) < lv, out);
    out += op;
    render_child(*e.args[1], level(*e.args[1]) <= lv, out);
}

double constant_value(const Expr& e) {
    const Jet j = evaluate(e, Jet(0.0), {});
    return j.value();
}

}  // namespace

ExprPtr parse_expression(const std::string& text, int dim_n) {
    if (dim_n < 2) throw WrongDimension("jump functions need dim_n >= 2");
    return Parser(text, dim_n).parse();
}

std::string to_string(const Expr& e) {
    std::string out;
    render(e, out);
    return out;
}

Jet evaluate(const Expr& e, const Jet& v, std::span<const Jet> z) {
    using K = Expr::Kind;
    switch (e.kind) {
        case K::number: return Jet(e.number);
        case K::variable: {
            if (e.name == "v" || e.name == "z1") return v;
            if (e.name == "pi") return Jet(std::numbers::pi);
            if (e.name == "r") {
                Jet s(0.0);
                for (const Jet& x : z) s += x * x;
                return sqrt(s);
            }
            const int slot = std::stoi(e.name.substr(1)) - 2;
            if (slot < 0 || slot >= static_cast<int>(z.size())) {
                throw UnknownIdentifier(e.offset, e.name);
            }
            return z[slot];
        }
        case K::negate: return -evaluate(*e.args[0], v, z);
        case K::add: return evaluate(*e.args[0], v, z) + evaluate(*e.args[1], v, z);
        case K::sub: return evaluate(*e.args[0], v, z) - evaluate(*e.args[1], v, z);
        case K::mul: return evaluate(*e.args[0], v, z) * evaluate(*e.args[1], v, z);
        case K::div: return evaluate(*e.args[0], v, z) / evaluate(*e.args[1], v, z);
        case K::pow: {
            const Jet base = evaluate(*e.args[0], v, z);
            const double p = constant_value(*e.args[1]);
            if (p == std::round(p) && std::abs(p) <= 64.0) return pow(base, static_cast<int>(p));
            return pow(base, p);
        }
        case K::call: {
            const Jet x = evaluate(*e.args[0], v, z);
            const std::string& f = e.name;
            if (f == "exp") return exp(x);
            if (f == "log") return log(x);
            if (f == "cosh") return cosh(x);
            if (f == "sinh") return sinh(x);
            if (f == "tanh") return tanh(x);
            if (f == "erf") return erf(x);
            if (f == "sqrt") return sqrt(x);
            throw UnknownIdentifier(e.offset, f);
        }
    }
    throw std::logic_error("unhandled expression kind");
}

// ----------------------------------------------------------------------------
// Jump functions
// ----------------------------------------------------------------------------

JumpFunction::JumpFunction(int dim_n, Family family, Body body, std::map<std::string, double> params,
                           ExprPtr expression, std::string description)
    : dim_n_(dim_n),
      family_(family),
      body_(std::move(body)),
      params_(std::move(params)),
      expression_(std::move(expression)),
      description_(std::move(description)) {
    if (dim_n_ < 2) throw WrongDimension("jump functions need dim_n >= 2");
}

Jet JumpFunction::evaluate(const Jet& v, std::span<const Jet> z) const {
    if (static_cast<int>(z.size()) != dim_n_ - 1) {
        throw WrongDimension("expected " + std::to_string(dim_n_ - 1) + " spatial coordinates, got " +
                             std::to_string(z.size()));
    }
    Jet h = body_(v, z);
    if (h.nvars() == 0 && v.nvars() > 0) h = Jet::constant(h.value(), v.nvars(), v.order());
    return h;
}

Jet JumpFunction::jets(double v, std::span<const double> z, int order) const {
    std::vector<double> point{v};
    point.insert(point.end(), z.begin(), z.end());
    const auto leaf = seed_variables(point, order);
    return evaluate(leaf[0], std::span<const Jet>(leaf).subspan(1));
}

double JumpFunction::value(double v, std::span<const double> z) const {
    std::vector<Jet> zj(z.begin(), z.end());
    return evaluate(Jet(v), zj).value();
}

JumpFunction parse_jump_expression(const std::string& text, int dim_n) {
    ExprPtr tree = parse_expression(text, dim_n);
    auto body = [tree](const Jet& v, std::span<const Jet> z) { return nullshell::evaluate(*tree, v, z); };
    return JumpFunction(dim_n, JumpFunction::Family::expression, body, {}, tree, to_string(*tree));
}

JumpFunction make_linear(const LinearParams& p, int dim_n) {
    if (!(p.a > 0.0)) throw ConstraintViolation("a > 0");
    if (static_cast<int>(p.b.size()) > dim_n - 1) {
        throw WrongDimension("linear jump function has more b coefficients than spatial coordinates");
    }
    std::vector<double> b = p.b;
    b.resize(dim_n - 1, 0.0);
    std::map<std::string, double> params{{"a", p.a}, {"c", p.c}};
    std::ostringstream desc;
    desc.precision(17);
    desc << p.a << "*v";
    for (std::size_t i = 0; i < b.size(); ++i) {
        params["b" + std::to_string(i + 2)] = b[i];
        if (b[i] != 0.0) desc << " + " << b[i] << "*z" << i + 2;
    }
    if (p.c != 0.0) desc << " + " << p.c;
    const double a = p.a;
    const double c = p.c;
    auto body = [a, b, c](const Jet& v, std::span<const Jet> z) {
        Jet h = a * v + c;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (b[i] != 0.0) h += b[i] * z[i];
        return h;
    };
    return JumpFunction(dim_n, JumpFunction::Family::linear, body, params, nullptr, desc.str());
}

JumpFunction make_wave(const WaveParams& p, int dim_n) {
    if (!(p.a > 0.0)) throw ConstraintViolation("a > 0");
    ExprPtr profile = parse_expression(p.profile, dim_n);
    if (profile->depends_on_v()) throw ConstraintViolation("wave profile independent of v");
    const double a = p.a;
    auto body = [a, profile](const Jet& v, std::span<const Jet> z) {
        return a * v + nullshell::evaluate(*profile, v, z);
    };
    std::ostringstream desc;
    desc.precision(17);
    desc << a << "*v + (" << to_string(*profile) << ")";
    return JumpFunction(dim_n, JumpFunction::Family::wave, body, {{"a", a}}, profile, desc.str());
}

void check_example_constraints(const ExampleParams& p) {
    if (!(p.b >= 2.0 * p.c)) throw ConstraintViolation("b >= 2c");
    if (!(p.c >= 0.0)) throw ConstraintViolation("2c >= 0");
    if (!(p.h0 >= p.c)) throw ConstraintViolation("h0 >= c");
    if (!(p.a > p.b + p.c)) throw ConstraintViolation("a > b + c");
}

JumpFunction make_example(const ExampleParams& p, int dim_n) {
    check_example_constraints(p);
    const ExampleParams q = p;
    auto body = [q](const Jet& v, std::span<const Jet> z) {
        Jet h = q.a * v - q.b * log(cosh(v));
        if (q.c != 0.0 || q.h0 != 0.0) {
            Jet r2(0.0);
            for (const Jet& x : z) r2 += x * x;
            const Jet r = sqrt(r2);
            if (q.c != 0.0) h -= q.c * tanh(r) * exp(-(v * v));
            if (q.h0 != 0.0) h -= q.h0 / 4.0 * r2 * erf(r);
        }
        return h;
    };
    std::ostringstream desc;
    desc.precision(17);
    desc << q.a << "*v - " << q.b << "*log(cosh(v)) - " << q.c << "*tanh(r)*exp(-v^2) - " << q.h0
         << "/4*r^2*erf(r)";
    return JumpFunction(dim_n, JumpFunction::Family::example, body,
                        {{"a", q.a}, {"b", q.b}, {"c", q.c}, {"h0", q.h0}}, nullptr, desc.str());
}

namespace {

struct OdeState {
    Jet w;
    Jet h;
    double min_w = 0.0;  // smallest step-endpoint value of w
};

double max_abs_diff(const Jet& a, const Jet& b) {
    const auto ca = a.coefficients();
    const auto cb = b.coefficients();
    double m = 0.0;
    for (std::size_t i = 0; i < std::min(ca.size(), cb.size()); ++i) m = std::max(m, std::abs(ca[i] - cb[i]));
    return m;
}

double max_abs(const Jet& a) {
    double m = 0.0;
    for (double c : a.coefficients()) m = std::max(m, std::abs(c));
    return m;
}

// Fixed-step RK4 for w' = -p w, h' = w over [lo, target] with `steps` steps.
OdeState integrate(const PressureProfile& prof, std::span<const Jet> z, const OdeState& start, double lo,
                   double target, int steps, int nvars, int order) {
    OdeState y = start;
    y.min_w = y.w.value();
    const double dt = (target - lo) / steps;
    auto rhs = [&](double v, const Jet& w) { return -(prof.p(Jet::constant(v, nvars, order), z) * w); };
    for (int s = 0; s < steps; ++s) {
        const double v = lo + s * dt;
        const Jet k1w = rhs(v, y.w);
        const Jet w2 = y.w + 0.5 * dt * k1w;
        const Jet k2w = rhs(v + 0.5 * dt, w2);
        const Jet w3 = y.w + 0.5 * dt * k2w;
        const Jet k3w = rhs(v + 0.5 * dt, w3);
        const Jet w4 = y.w + dt * k3w;
        const Jet k4w = rhs(v + dt, w4);
        y.h += dt / 6.0 * (y.w + 2.0 * w2 + 2.0 * w3 + w4);
        y.w += dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        y.min_w = std::min(y.min_w, y.w.value());
    }
    return y;
}

}  // namespace

JumpFunction from_pressure(PressureProfile profile, const VGrid& grid, int dim_n) {
    if (!(grid.step > 0.0) || !(grid.hi > grid.lo)) throw DomainError("from_pressure needs lo < hi and step > 0");
    if (!profile.p || !profile.beta) throw std::invalid_argument("pressure profile needs p and beta");
    if (!profile.offset) {
        profile.offset = [](std::span<const Jet> z) { return z.empty() ? Jet(0.0) : 0.0 * z[0]; };
    }
    const auto prof = std::make_shared<const PressureProfile>(std::move(profile));
    const VGrid g = grid;

    auto leaf_jet = [prof, g, dim_n](double v0, std::span<const double> z0, int order) {
        const double slack = 1e-12 * (g.hi - g.lo);
        if (v0 < g.lo - slack || v0 > g.hi + slack) {
            throw DomainError("v = " + std::to_string(v0) + " outside the integration grid");
        }
        std::vector<double> point{v0};
        point.insert(point.end(), z0.begin(), z0.end());
        const auto leaf = seed_variables(point, order);
        const std::span<const Jet> zs(leaf.data() + 1, leaf.size() - 1);

        // Values at v0 as z-jets.
        OdeState start{prof->beta(zs), prof->offset(zs), 0.0};
        start.w = start.w + 0.0 * leaf[0];
        start.h = start.h + 0.0 * leaf[0];
        OdeState at = start;
        const double span_v = v0 - g.lo;
        if (span_v > 0.0) {
            const int n = std::max(1, static_cast<int>(std::ceil(span_v / g.step - 1e-9)));
            const OdeState coarse = integrate(*prof, zs, start, g.lo, v0, n, dim_n, order);
            const OdeState fine = integrate(*prof, zs, start, g.lo, v0, 2 * n, dim_n, order);
            const double diff = std::max(max_abs_diff(coarse.w, fine.w), max_abs_diff(coarse.h, fine.h));
            const double scale = std::max({1.0, max_abs(fine.w), max_abs(fine.h)});
            if (!(diff / 15.0 <= 1e-9 * scale)) {
                throw StepSizeError("Runge-Kutta step " + std::to_string(g.step) +
                                    " too coarse: step-halving difference " + std::to_string(diff));
            }
            if (!(fine.min_w > 0.0)) {
                throw NonPositiveDerivative("dH/dv = " + std::to_string(fine.min_w) + " <= 0 on the grid");
            }
            at.w = fine.w + (fine.w - coarse.w) / 15.0;
            at.h = fine.h + (fine.h - coarse.h) / 15.0;
        }
        if (!(at.w.value() > 0.0)) throw NonPositiveDerivative("dH/dv <= 0 at v = " + std::to_string(v0));

        // Local v-dependence: W = w0 - int p W, H = h0 + int W.
        Jet W = at.w;
        for (int k = 0; k <= order; ++k) W = at.w - (prof->p(leaf[0], zs) * W).integral(0);
        return at.h + W.integral(0);
    };

    auto body = [leaf_jet](const Jet& v, std::span<const Jet> z) {
        std::vector<double> z0;
        for (const Jet& x : z) z0.push_back(x.value());
        const int order = v.nvars() == 0 ? 0 : v.order();
        const Jet local = leaf_jet(v.value(), z0, order);
        if (v.nvars() == 0) return Jet(local.value());
        std::vector<Jet> args{v};
        args.insert(args.end(), z.begin(), z.end());
        return substitute(local, args);
    };
    return JumpFunction(dim_n, JumpFunction::Family::from_pressure, body,
                        {{"v_lo", g.lo}, {"v_hi", g.hi}, {"step", g.step}}, nullptr, "from_pressure");
}

AdmissibilityReport check_admissibility(const JumpFunction& H, std::span<const LeafPoint> grid) {
    AdmissibilityReport report;
    report.min_dvH = std::numeric_limits<double>::infinity();
    for (const LeafPoint& p : grid) {
        const double dv = H.jets(p.v, p.z, 1).d(0);
        if (dv < report.min_dvH || report.points == 0) {
            report.min_dvH = dv;
            report.argmin = p;
        }
        ++report.points;
    }
    report.pass = report.points > 0 && report.min_dvH > 0.0;
    return report;
}

double require_admissible(const JumpFunction& H, double v, std::span<const double> z) {
    const double dv = H.jets(v, z, 1).d(0);
    if (!(dv > 0.0)) {
        throw NonPositiveDerivative("dH/dv = " + std::to_string(dv) + " is not positive at v = " + std::to_string(v));
    }
    return dv;
}

}  // namespace nullshell
