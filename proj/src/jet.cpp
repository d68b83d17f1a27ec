#include "nullshell/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nullshell/errors.hpp"

namespace nullshell {
namespace detail {

struct ProductTerm {
    std::uint16_t lhs;
    std::uint16_t rhs;
    std::uint16_t out;
};

struct ShiftTerm {
    std::uint16_t from;
    std::uint16_t to;
    double factor;
};

struct MonomialTable {
    int nvars = 0;
    std::vector<std::vector<int>> exponents;
    std::vector<int> degree;
    std::vector<double> factorial_weight;  // a! = prod a_i!
    std::array<std::size_t, kMaxJetOrder + 1> size_up_to{};
    std::vector<ProductTerm> products;  // sorted by out
    std::vector<std::vector<ShiftTerm>> derivative;
    std::vector<std::vector<ShiftTerm>> integral;
    std::map<std::vector<int>, std::size_t> index;
};

namespace {

void enumerate_degree(int nvars, int remaining, int var, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
    if (var == nvars - 1) {
        current[var] = remaining;
        out.push_back(current);
        return;
    }
    for (int k = remaining; k >= 0; --k) {
        current[var] = k;
        enumerate_degree(nvars, remaining - k, var + 1, current, out);
    }
    current[var] = 0;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::unique_ptr<MonomialTable> build_table(int nvars) {
    auto table = std::make_unique<MonomialTable>();
    table->nvars = nvars;
    if (nvars == 0) {
        table->exponents.push_back({});
    } else {
        std::vector<int> current(nvars, 0);
        for (int deg = 0; deg <= kMaxJetOrder; ++deg) {
            enumerate_degree(nvars, deg, 0, current, table->exponents);
        }
    }
    const std::size_t count = table->exponents.size();
    table->size_up_to.fill(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto& e = table->exponents[i];
        int deg = 0;
        double w = 1.0;
        for (int a : e) {
            deg += a;
            w *= factorial(a);
        }
        table->degree.push_back(deg);
        table->factorial_weight.push_back(w);
        table->index.emplace(e, i);
    }
    if (nvars > 0) {
        for (int k = 0; k <= kMaxJetOrder; ++k) {
            table->size_up_to[k] = static_cast<std::size_t>(
                std::count_if(table->degree.begin(), table->degree.end(),
                              [k](int d) { return d <= k; }));
        }
    }

    // Products: every split of each output monomial into two factors.
    for (std::size_t out = 0; out < count; ++out) {
        const auto& alpha = table->exponents[out];
        std::vector<int> beta(nvars, 0);
        while (true) {
            std::vector<int> gamma(nvars);
            for (int v = 0; v < nvars; ++v) gamma[v] = alpha[v] - beta[v];
            table->products.push_back({static_cast<std::uint16_t>(table->index.at(beta)),
                                       static_cast<std::uint16_t>(table->index.at(gamma)),
                                       static_cast<std::uint16_t>(out)});
            int v = 0;
            while (v < nvars && beta[v] == alpha[v]) {
                beta[v] = 0;
                ++v;
            }
            if (v == nvars) break;
            ++beta[v];
        }
    }

    table->derivative.resize(nvars);
    table->integral.resize(nvars);
    for (int v = 0; v < nvars; ++v) {
        for (std::size_t i = 0; i < count; ++i) {
            auto e = table->exponents[i];
            if (e[v] > 0) {
                const double factor = e[v];
                --e[v];
                table->derivative[v].push_back({static_cast<std::uint16_t>(i),
                                                static_cast<std::uint16_t>(table->index.at(e)),
                                                factor});
                ++e[v];
            }
            if (table->degree[i] < kMaxJetOrder) {
                ++e[v];
                table->integral[v].push_back({static_cast<std::uint16_t>(i),
                                              static_cast<std::uint16_t>(table->index.at(e)),
                                              1.0 / e[v]});
            }
        }
    }
    return table;
}

const MonomialTable* table_for(int nvars) {
    if (nvars < 0 || nvars > kMaxJetVars) {
        throw std::invalid_argument("jet variable count out of range: " + std::to_string(nvars));
    }
    static std::array<std::unique_ptr<MonomialTable>, kMaxJetVars + 1> tables;
    static std::array<std::once_flag, kMaxJetVars + 1> flags;
    std::call_once(flags[nvars], [nvars] { tables[nvars] = build_table(nvars); });
    return tables[nvars].get();
}

void check_order(int order) {
    if (order < 0 || order > kMaxJetOrder) {
        throw std::invalid_argument("jet order out of range: " + std::to_string(order));
    }
}

}  // namespace
}  // namespace detail

Jet::Jet() : Jet(0.0) {}

Jet::Jet(double value) : table_(detail::table_for(0)), order_(0), coeffs_{value} {}

Jet::Jet(const detail::MonomialTable* table, int order)
    : table_(table), order_(order), coeffs_(table->size_up_to[order], 0.0) {}

Jet Jet::constant(double value, int nvars, int order) {
    detail::check_order(order);
    Jet j(detail::table_for(nvars), nvars == 0 ? 0 : order);
    j.coeffs_[0] = value;
    return j;
}

Jet Jet::variable(double value, int index, int nvars, int order) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("jet variable index out of range");
    Jet j = constant(value, nvars, order);
    if (order >= 1) {
        std::vector<int> e(nvars, 0);
        e[index] = 1;
        j.coeffs_[j.table_->index.at(e)] = 1.0;
    }
    return j;
}

int Jet::nvars() const noexcept { return table_->nvars; }

double Jet::partial(std::span<const int> multiplicity) const {
    if (static_cast<int>(multiplicity.size()) != nvars()) {
        throw std::invalid_argument("multi-index size does not match jet variable count");
    }
    int deg = 0;
    for (int a : multiplicity) {
        if (a < 0) throw std::invalid_argument("negative multi-index entry");
        deg += a;
    }
    if (deg > order_) {
        throw InsufficientOrder("partial of degree " + std::to_string(deg) +
                                " requested from a jet of order " + std::to_string(order_));
    }
    const std::vector<int> key(multiplicity.begin(), multiplicity.end());
    const std::size_t i = table_->index.at(key);
    return coeffs_[i] * table_->factorial_weight[i];
}

double Jet::d(std::initializer_list<int> variables) const {
    if (nvars() == 0) {
        if (variables.size() == 0) return value();
        return 0.0;
    }
    std::vector<int> m(nvars(), 0);
    for (int v : variables) {
        if (v < 0 || v >= nvars()) throw std::invalid_argument("variable index out of range");
        ++m[v];
    }
    return partial(m);
}

Jet Jet::derivative(int var) const {
    if (nvars() == 0) return Jet(0.0);
    if (var < 0 || var >= nvars()) throw std::invalid_argument("variable index out of range");
    if (order_ == 0) throw InsufficientOrder("cannot differentiate an order-0 jet");
    Jet out(table_, order_ - 1);
    const std::size_t n = coeffs_.size();
    for (const auto& t : table_->derivative[var]) {
        if (t.from < n) out.coeffs_[t.to] += t.factor * coeffs_[t.from];
    }
    return out;
}

Jet Jet::integral(int var) const {
    if (var < 0 || var >= nvars()) throw std::invalid_argument("variable index out of range");
    Jet out(table_, order_);
    const std::size_t n = coeffs_.size();
    for (const auto& t : table_->integral[var]) {
        if (t.to < n) out.coeffs_[t.to] += t.factor * coeffs_[t.from];
    }
    return out;
}

Jet Jet::truncated(int order) const {
    if (nvars() == 0 || order >= order_) return *this;
    detail::check_order(order);
    Jet out(table_, order);
    std::copy_n(coeffs_.begin(), out.coeffs_.size(), out.coeffs_.begin());
    return out;
}

void Jet::align(const Jet& other) {
    if (nvars() == 0) {
        const double v = value();
        *this = constant(v, other.nvars(), other.order_);
        return;
    }
    if (table_ != other.table_) {
        throw std::invalid_argument("jets over different variable counts cannot be combined");
    }
    if (other.order_ < order_) *this = truncated(other.order_);
}

Jet Jet::operator-() const {
    Jet out = *this;
    for (double& c : out.coeffs_) c = -c;
    return out;
}

Jet& Jet::operator+=(const Jet& other) {
    if (other.nvars() == 0) return *this += other.value();
    align(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& other) {
    if (other.nvars() == 0) return *this -= other.value();
    align(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& other) {
    *this = *this * other;
    return *this;
}

Jet& Jet::operator/=(const Jet& other) {
    *this = *this / other;
    return *this;
}

Jet& Jet::operator+=(double c) {
    coeffs_[0] += c;
    return *this;
}

Jet& Jet::operator-=(double c) {
    coeffs_[0] -= c;
    return *this;
}

Jet& Jet::operator*=(double c) {
    for (double& x : coeffs_) x *= c;
    return *this;
}

Jet& Jet::operator/=(double c) {
    for (double& x : coeffs_) x /= c;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    if (b.nvars() == 0) return a * b.value();
    if (a.nvars() == 0) return b * a.value();
    if (a.table_ != b.table_) {
        throw std::invalid_argument("jets over different variable counts cannot be combined");
    }
    const int order = std::min(a.order_, b.order_);
    Jet out(a.table_, order);
    const std::size_t n = out.coeffs_.size();
    for (const auto& t : a.table_->products) {
        if (t.out >= n) break;
        out.coeffs_[t.out] += a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
    }
    return out;
}

Jet operator/(const Jet& a, const Jet& b) {
    if (b.nvars() == 0) {
        if (b.value() == 0.0) throw DomainError("division by zero");
        return a / b.value();
    }
    return a * reciprocal(b);
}

Jet operator/(double c, const Jet& a) { return reciprocal(a) * c; }

Jet compose(const Jet& x, std::span<const double> taylor) {
    if (taylor.empty()) throw std::invalid_argument("empty Taylor expansion");
    if (x.nvars() == 0 || x.order_ == 0) {
        return Jet::constant(taylor[0], x.nvars(), x.order_);
    }
    const int order = x.order_;
    if (static_cast<int>(taylor.size()) < order + 1) {
        throw InsufficientOrder("Taylor expansion shorter than jet order");
    }
    Jet h = x;
    h.coeffs_[0] = 0.0;
    Jet result = Jet::constant(taylor[order], x.nvars(), order);
    for (int k = order - 1; k >= 0; --k) {
        result = result * h;
        result.coeffs_[0] += taylor[k];
    }
    return result;
}

Jet substitute(const Jet& f, std::span<const Jet> args) {
    if (f.nvars() == 0) return Jet(f.value());
    if (static_cast<int>(args.size()) != f.nvars()) {
        throw std::invalid_argument("substitute: argument count does not match jet variable count");
    }
    const int K = f.order_;
    // Powers of the increments h_i = args_i - args_i(0).
    std::vector<std::vector<Jet>> powers(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        Jet h = args[i] - args[i].value();
        powers[i].push_back(Jet(1.0));
        for (int k = 1; k <= K; ++k) powers[i].push_back(powers[i].back() * h);
    }
    Jet result(f.value());
    for (std::size_t idx = 1; idx < f.coeffs_.size(); ++idx) {
        const double c = f.coeffs_[idx];
        if (c == 0.0) continue;
        Jet term(c);
        const auto& e = f.table_->exponents[idx];
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) term = term * powers[i][e[i]];
        result += term;
    }
    return result;
}

namespace {

double inv_factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return 1.0 / f;
}

// Evaluates the polynomial with the given ascending coefficients.
double horner(const std::vector<double>& p, double x) {
    double r = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) r = r * x + *it;
    return r;
}

std::vector<double> poly_derivative(const std::vector<double>& p) {
    if (p.size() <= 1) return {0.0};
    std::vector<double> d(p.size() - 1);
    for (std::size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * static_cast<double>(i);
    return d;
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

std::vector<double> poly_sub(std::vector<double> a, const std::vector<double>& b) {
    if (a.size() < b.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return a;
}

int order_of(const Jet& x) { return x.nvars() == 0 ? 0 : x.order(); }

}  // namespace

Jet exp(const Jet& x) {
    const int K = order_of(x);
    const double e = std::exp(x.value());
    std::vector<double> t(K + 1);
    for (int k = 0; k <= K; ++k) t[k] = e * inv_factorial(k);
    return compose(x, t);
}

Jet log(const Jet& x) {
    const double x0 = x.value();
    if (!(x0 > 0.0)) throw DomainError("log of non-positive argument " + std::to_string(x0));
    const int K = order_of(x);
    std::vector<double> t(K + 1);
    t[0] = std::log(x0);
    for (int k = 1; k <= K; ++k) t[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * std::pow(x0, k));
    return compose(x, t);
}

Jet pow(const Jet& x, double exponent) {
    const double x0 = x.value();
    const int K = order_of(x);
    if (x0 == 0.0 && K == 0 && exponent > 0.0) return Jet::constant(0.0, x.nvars(), 0);
    if (!(x0 > 0.0)) {
        throw DomainError("real power of non-positive base " + std::to_string(x0));
    }
    std::vector<double> t(K + 1);
    const double base = std::pow(x0, exponent);
    double binom = 1.0;
    for (int k = 0; k <= K; ++k) {
        t[k] = binom * base / std::pow(x0, k);
        binom *= (exponent - k) / (k + 1);
    }
    return compose(x, t);
}

Jet sqrt(const Jet& x) {
    const double x0 = x.value();
    const int K = order_of(x);
    if (x0 == 0.0 && K == 0) return Jet::constant(0.0, x.nvars(), 0);
    if (!(x0 > 0.0)) throw DomainError("sqrt of non-positive argument " + std::to_string(x0));
    std::vector<double> t(K + 1);
    const double s = std::sqrt(x0);
    double binom = 1.0;
    for (int k = 0; k <= K; ++k) {
        t[k] = binom * s / std::pow(x0, k);
        binom *= (0.5 - k) / (k + 1);
    }
    return compose(x, t);
}

Jet reciprocal(const Jet& x) {
    const double x0 = x.value();
    if (x0 == 0.0) throw DomainError("division by zero");
    const int K = order_of(x);
    std::vector<double> t(K + 1);
    double p = 1.0 / x0;
    for (int k = 0; k <= K; ++k) {
        t[k] = (k % 2 == 0) ? p : -p;
        p /= x0;
    }
    return compose(x, t);
}

Jet pow(const Jet& x, int exponent) {
    if (exponent < 0) return reciprocal(pow(x, -exponent));
    Jet result = Jet::constant(1.0, x.nvars(), order_of(x));
    Jet base = x;
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

Jet sin(const Jet& x) {
    const int K = order_of(x);
    const double s = std::sin(x.value());
    const double c = std::cos(x.value());
    const double cycle[4] = {s, c, -s, -c};
    std::vector<double> t(K + 1);
    for (int k = 0; k <= K; ++k) t[k] = cycle[k % 4] * inv_factorial(k);
    return compose(x, t);
}

Jet cos(const Jet& x) {
    const int K = order_of(x);
    const double s = std::sin(x.value());
    const double c = std::cos(x.value());
    const double cycle[4] = {c, -s, -c, s};
    std::vector<double> t(K + 1);
    for (int k = 0; k <= K; ++k) t[k] = cycle[k % 4] * inv_factorial(k);
    return compose(x, t);
}

Jet sinh(const Jet& x) {
    const int K = order_of(x);
    const double s = std::sinh(x.value());
    const double c = std::cosh(x.value());
    std::vector<double> t(K + 1);
    for (int k = 0; k <= K; ++k) t[k] = ((k % 2 == 0) ? s : c) * inv_factorial(k);
    return compose(x, t);
}

Jet cosh(const Jet& x) {
    const int K = order_of(x);
    const double s = std::sinh(x.value());
    const double c = std::cosh(x.value());
    std::vector<double> t(K + 1);
    for (int k = 0; k <= K; ++k) t[k] = ((k % 2 == 0) ? c : s) * inv_factorial(k);
    return compose(x, t);
}

Jet tanh(const Jet& x) {
    // d^k tanh = P_k(tanh), P_0(t) = t, P_{k+1} = P_k' (1 - t^2).
    const int K = order_of(x);
    const double t0 = std::tanh(x.value());
    std::vector<double> p = {0.0, 1.0};
    const std::vector<double> sech2 = {1.0, 0.0, -1.0};
    std::vector<double> t(K + 1);
    for (int k = 0; k <= K; ++k) {
        t[k] = horner(p, t0) * inv_factorial(k);
        p = poly_mul(poly_derivative(p), sech2);
    }
    return compose(x, t);
}

Jet erf(const Jet& x) {
    // d^k erf = (2/sqrt(pi)) Q_{k-1}(x) exp(-x^2), Q_0 = 1, Q_{j+1} = Q_j' - 2x Q_j.
    const int K = order_of(x);
    const double x0 = x.value();
    const double gauss = 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x0 * x0);
    std::vector<double> q = {1.0};
    const std::vector<double> two_x = {0.0, 2.0};
    std::vector<double> t(K + 1);
    t[0] = std::erf(x0);
    for (int k = 1; k <= K; ++k) {
        t[k] = gauss * horner(q, x0) * inv_factorial(k);
        q = poly_sub(poly_derivative(q), poly_mul(two_x, q));
    }
    return compose(x, t);
}

std::vector<Jet> seed_variables(std::span<const double> coordinates, int order) {
    const int n = static_cast<int>(coordinates.size());
    std::vector<Jet> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(Jet::variable(coordinates[i], i, n, order));
    return out;
}

}  // namespace nullshell
