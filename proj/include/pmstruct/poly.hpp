#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "pmstruct/types.hpp"

// Dense scalar polynomials with coefficients in ascending power order.
// coeffs = {c0, c1, ..., cd} represents c0 + c1*x + ... + cd*x^d.  The zero
// polynomial is the empty coefficient vector; its degree is reported as -1.

namespace pmstruct {

template <class S>
struct Poly {
    std::vector<S> c;

    Poly() = default;
    explicit Poly(std::vector<S> coeffs) : c(std::move(coeffs)) { trim(); }
    static Poly constant(S v) {
        Poly p;
        if (v != S(0)) p.c = {v};
        return p;
    }
    static Poly monomial(int deg, S v = S(1)) {
        Poly p;
        if (v != S(0)) {
            p.c.assign(static_cast<size_t>(deg) + 1, S(0));
            p.c.back() = v;
        }
        return p;
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    S lead() const { return c.empty() ? S(0) : c.back(); }

    double max_abs() const {
        double m = 0.0;
        for (const S& v : c) m = std::max(m, std::abs(v));
        return m;
    }

    // Drop trailing coefficients that are exactly zero (construction-time
    // normalisation); tolerance-based truncation is a separate, explicit step.
    void trim() {
        while (!c.empty() && c.back() == S(0)) c.pop_back();
    }

    // Remove trailing coefficients below tol in magnitude.
    void truncate(double tol) {
        while (!c.empty() && std::abs(c.back()) <= tol) c.pop_back();
    }

    S eval(const S& x) const {
        S acc(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    cplx eval(const cplx& x) const
        requires(!scalar_traits<S>::is_complex)
    {
        cplx acc(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + cplx(*it);
        return acc;
    }

    Poly reversed(int grade) const {
        // coefficients of x^grade * p(1/x); requires grade >= degree
        if (grade < degree())
            throw GradeTooSmall("polynomial reversal grade below actual degree");
        Poly r;
        r.c.assign(static_cast<size_t>(grade) + 1, S(0));
        for (size_t i = 0; i < c.size(); ++i) r.c[static_cast<size_t>(grade) - i] = c[i];
        r.trim();
        return r;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly r;
        r.c.resize(std::max(a.c.size(), b.c.size()), S(0));
        for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
        r.trim();
        return r;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly r;
        r.c.resize(std::max(a.c.size(), b.c.size()), S(0));
        for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
        r.trim();
        return r;
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        Poly r;
        r.c.assign(a.c.size() + b.c.size() - 1, S(0));
        for (size_t i = 0; i < a.c.size(); ++i)
            for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
        r.trim();
        return r;
    }
    friend Poly operator*(const S& s, const Poly& p) {
        Poly r = p;
        for (auto& v : r.c) v = s * v;
        r.trim();
        return r;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c == b.c; }
};

// Euclidean division a = q*b + r with deg r < deg b.  The divisor's leading
// coefficient is used as-is (no monic normalisation), so exact integer inputs
// with unit leading coefficient divide exactly.
template <class S>
std::pair<Poly<S>, Poly<S>> poly_divrem(const Poly<S>& a, const Poly<S>& b) {
    if (b.is_zero()) throw Error("polynomial division by zero");
    Poly<S> q, r = a;
    const int db = b.degree();
    if (a.degree() >= db) q.c.assign(static_cast<size_t>(a.degree() - db) + 1, S(0));
    while (r.degree() >= db) {
        const int shift = r.degree() - db;
        const S f = r.lead() / b.lead();
        q.c[static_cast<size_t>(shift)] += f;
        // r -= f * x^shift * b, with the leading term cancelled exactly
        for (int i = 0; i <= db; ++i)
            r.c[static_cast<size_t>(i + shift)] -= f * b.c[static_cast<size_t>(i)];
        r.c.pop_back();
        r.trim();
    }
    q.trim();
    return {q, r};
}

// Tolerance-aware monic GCD via the Euclidean algorithm.  Each remainder is
// truncated relative to the working operands so that near-cancellations do not
// fabricate spurious low-degree factors.  Adequate for the small, well-scaled
// denominators this library manipulates; not a general-purpose approximate GCD.
template <class S>
Poly<S> poly_gcd(Poly<S> a, Poly<S> b, double rtol = 1e-9) {
    auto monic = [](Poly<S> p) {
        if (!p.is_zero()) {
            const S l = p.lead();
            for (auto& v : p.c) v = v / l;
        }
        return p;
    };
    a = monic(std::move(a));
    b = monic(std::move(b));
    while (!b.is_zero()) {
        auto [q, r] = poly_divrem(a, b);
        const double scale = std::max(1.0, std::max(a.max_abs(), b.max_abs()));
        r.truncate(rtol * scale);
        a = std::move(b);
        b = monic(std::move(r));
    }
    return monic(std::move(a));
}

template <class S>
Poly<S> poly_lcm(const Poly<S>& a, const Poly<S>& b, double rtol = 1e-9) {
    if (a.is_zero() || b.is_zero()) return Poly<S>();
    const Poly<S> g = poly_gcd(a, b, rtol);
    auto [q, r] = poly_divrem(b, g);
    (void)r;  // remainder is numerically zero by construction of g
    return a * q;
}

}  // namespace pmstruct
