#pragma once
// Exact base rings: Z, Q, Z/m, F_p. All arithmetic is arbitrary-precision;
// nothing in the library ever touches floating point.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

namespace ainfty {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

enum class RingKind { Integers, Rationals, IntegersMod, PrimeField };

struct RingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Floor division/remainder on cpp_int (cpp_int's % truncates toward zero).
inline Int fdiv(const Int& a, const Int& b) {
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}
inline Int fmod(const Int& a, const Int& b) { return a - fdiv(a, b) * b; }

// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
inline std::tuple<Int, Int, Int> xgcd(Int a, Int b) {
    Int x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        Int q = a / b;
        Int t = a - q * b; a = b; b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    return {a, x0, y0};
}

inline bool is_probable_prime(const Int& n) {
    if (n < 2) return false;
    for (Int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    // Miller-Rabin with fixed bases; deterministic far beyond any modulus
    // this library will meet.
    Int d = n - 1;
    int s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    for (Int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Int x = boost::multiprecision::powm(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = x * x % n;
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

class IntegerRing {
public:
    using Elem = Int;
    static constexpr RingKind kind = RingKind::Integers;
    static constexpr bool is_field = false;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(long long v) const { return Elem(v); }
    Elem neg(const Elem& a) const { return -a; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_unit(const Elem& a) const { return a == 1 || a == -1; }
    std::optional<Elem> try_div(const Elem& a, const Elem& b) const {
        if (b == 0) return std::nullopt;
        if (a % b != 0) return std::nullopt;
        return a / b;
    }
    std::string to_string(const Elem& a) const { return a.str(); }
    std::optional<Elem> parse(const std::string& s) const {
        try { return Elem(s); } catch (...) { return std::nullopt; }
    }
    std::string name() const { return "Z"; }
};

class RationalField {
public:
    using Elem = Rat;
    static constexpr RingKind kind = RingKind::Rationals;
    static constexpr bool is_field = true;

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(long long v) const { return Elem(v); }
    Elem neg(const Elem& a) const { return -a; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_unit(const Elem& a) const { return a != 0; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw RingError("division by zero in Q");
        return Elem(1) / a;
    }
    std::optional<Elem> try_div(const Elem& a, const Elem& b) const {
        if (b == 0) return std::nullopt;
        return a / b;
    }
    std::string to_string(const Elem& a) const {
        if (denominator(a) == 1) return numerator(a).str();
        return numerator(a).str() + "/" + denominator(a).str();
    }
    std::optional<Elem> parse(const std::string& s) const {
        try {
            auto slash = s.find('/');
            if (slash == std::string::npos) return Elem(Int(s));
            Int num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) return std::nullopt;
            return Elem(num) / Elem(den);
        } catch (...) { return std::nullopt; }
    }
    std::string name() const { return "Q"; }
};

// Z/m for arbitrary m >= 2 (zero divisors allowed). Elements are stored
// reduced into [0, m).
class ModularRing {
public:
    using Elem = Int;
    static constexpr RingKind kind = RingKind::IntegersMod;
    static constexpr bool is_field = false;

    // sentinel for containers; any arithmetic on it throws via division by 0
    ModularRing() : m_(0) {}
    explicit ModularRing(Int m) : m_(std::move(m)) {
        if (m_ < 2) throw RingError("modulus must be >= 2");
    }
    const Int& modulus() const { return m_; }

    Elem reduce(const Int& a) const { return fmod(a, m_); }
    Elem zero() const { return 0; }
    Elem one() const { return reduce(1); }
    Elem from_int(long long v) const { return reduce(Int(v)); }
    Elem neg(const Elem& a) const { return reduce(-a); }
    Elem add(const Elem& a, const Elem& b) const { return reduce(a + b); }
    Elem sub(const Elem& a, const Elem& b) const { return reduce(a - b); }
    Elem mul(const Elem& a, const Elem& b) const { return reduce(a * b); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_unit(const Elem& a) const { return boost::multiprecision::gcd(a, m_) == 1; }
    std::optional<Elem> try_div(const Elem& a, const Elem& b) const {
        auto [g, x, y] = xgcd(b, m_);
        (void)y;
        if (a % g != 0) return std::nullopt;
        return reduce(x * (a / g));
    }
    std::string to_string(const Elem& a) const { return a.str(); }
    std::optional<Elem> parse(const std::string& s) const {
        try { return reduce(Int(s)); } catch (...) { return std::nullopt; }
    }
    std::string name() const { return "Z/" + m_.str(); }

private:
    Int m_;
};

class PrimeField {
public:
    using Elem = Int;
    static constexpr RingKind kind = RingKind::PrimeField;
    static constexpr bool is_field = true;

    // sentinel for containers; any arithmetic on it throws via division by 0
    PrimeField() : p_(0) {}
    explicit PrimeField(Int p) : p_(std::move(p)) {
        if (!is_probable_prime(p_)) throw RingError("characteristic of F_p must be prime");
    }
    const Int& modulus() const { return p_; }

    Elem reduce(const Int& a) const { return fmod(a, p_); }
    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(long long v) const { return reduce(Int(v)); }
    Elem neg(const Elem& a) const { return reduce(-a); }
    Elem add(const Elem& a, const Elem& b) const { return reduce(a + b); }
    Elem sub(const Elem& a, const Elem& b) const { return reduce(a - b); }
    Elem mul(const Elem& a, const Elem& b) const { return reduce(a * b); }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    bool is_unit(const Elem& a) const { return a != 0; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw RingError("division by zero in F_p");
        auto [g, x, y] = xgcd(a, p_);
        (void)g; (void)y;
        return reduce(x);
    }
    std::optional<Elem> try_div(const Elem& a, const Elem& b) const {
        if (b == 0) return std::nullopt;
        return mul(a, inv(b));
    }
    std::string to_string(const Elem& a) const { return a.str(); }
    std::optional<Elem> parse(const std::string& s) const {
        try { return reduce(Int(s)); } catch (...) { return std::nullopt; }
    }
    std::string name() const { return "F_" + p_.str(); }

private:
    Int p_;
};

template <class R>
concept ring = requires(const R r, const typename R::Elem a, const typename R::Elem b) {
    typename R::Elem;
    { r.zero() } -> std::same_as<typename R::Elem>;
    { r.one() } -> std::same_as<typename R::Elem>;
    { r.add(a, b) } -> std::same_as<typename R::Elem>;
    { r.sub(a, b) } -> std::same_as<typename R::Elem>;
    { r.mul(a, b) } -> std::same_as<typename R::Elem>;
    { r.neg(a) } -> std::same_as<typename R::Elem>;
    { r.is_zero(a) } -> std::same_as<bool>;
    { r.eq(a, b) } -> std::same_as<bool>;
    { r.to_string(a) } -> std::same_as<std::string>;
};

// Runtime ring descriptor, used by the CLI / file formats to pick an
// instantiation.
struct RingSpec {
    RingKind kind = RingKind::Integers;
    Int modulus = 0;

    bool operator==(const RingSpec&) const = default;
};

template <class F>
auto with_ring(const RingSpec& spec, F&& f) {
    switch (spec.kind) {
    case RingKind::Integers: return f(IntegerRing{});
    case RingKind::Rationals: return f(RationalField{});
    case RingKind::IntegersMod: return f(ModularRing{spec.modulus});
    case RingKind::PrimeField: return f(PrimeField{spec.modulus});
    }
    throw RingError("unknown ring kind");
}

} // namespace ainfty
