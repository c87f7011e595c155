#ifndef HSL_VARTABLE_HPP
#define HSL_VARTABLE_HPP

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsl {

constexpr int MAXV = 16;

// Dense exponent vector over a fixed variable table. Arity is carried in the
// value so monomials are self-contained keys.
struct Mono {
    std::int8_t n = 0;
    std::array<std::int16_t, MAXV> e{};

    static Mono zero(int arity) {
        Mono m;
        m.n = static_cast<std::int8_t>(arity);
        return m;
    }
    static Mono unit(int arity, int var, int exp = 1) {
        Mono m = zero(arity);
        m.e[var] = static_cast<std::int16_t>(exp);
        return m;
    }
    int operator[](int i) const { return e[i]; }
    bool is_zero() const {
        for (int i = 0; i < n; ++i)
            if (e[i]) return false;
        return true;
    }
    long degree() const {
        long d = 0;
        for (int i = 0; i < n; ++i) d += e[i];
        return d;
    }
    Mono& operator+=(const Mono& o) {
        for (int i = 0; i < n; ++i) e[i] = static_cast<std::int16_t>(e[i] + o.e[i]);
        return *this;
    }
    friend Mono operator+(Mono a, const Mono& b) { return a += b; }
    friend Mono operator-(Mono a, const Mono& b) {
        for (int i = 0; i < a.n; ++i) a.e[i] = static_cast<std::int16_t>(a.e[i] - b.e[i]);
        return a;
    }
    Mono scaled(int k) const {
        Mono m = *this;
        for (int i = 0; i < n; ++i) m.e[i] = static_cast<std::int16_t>(m.e[i] * k);
        return m;
    }
    Mono negated() const { return scaled(-1); }
    friend bool operator==(const Mono& a, const Mono& b) {
        if (a.n != b.n) return false;
        return std::memcmp(a.e.data(), b.e.data(), sizeof(std::int16_t) * a.n) == 0;
    }
    // Plain lexicographic compare; used for canonical factor orientation.
    int lex_cmp(const Mono& o) const {
        for (int i = 0; i < n; ++i)
            if (e[i] != o.e[i]) return e[i] < o.e[i] ? -1 : 1;
        return 0;
    }
    // True if the leading nonzero exponent is positive.
    bool lex_positive() const {
        for (int i = 0; i < n; ++i)
            if (e[i]) return e[i] > 0;
        return false;
    }
};

// Graded-lex: total degree first, then lexicographic. Total order, deterministic.
struct MonoGrlex {
    bool operator()(const Mono& a, const Mono& b) const {
        long da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return a.lex_cmp(b) < 0;
    }
};

struct MonoHash {
    std::size_t operator()(const Mono& m) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (int i = 0; i < m.n; ++i) {
            h ^= static_cast<std::uint16_t>(m.e[i]);
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h ^ m.n);
    }
};

enum class VarRole { TorusMult, TorusAdd, Aux, CentralPoly };

// Ordered registry of variable symbols. Immutable after construction.
class VarTable {
public:
    VarTable() = default;
    int add(const std::string& name, VarRole role) {
        if (names_.size() >= MAXV) throw std::runtime_error("VarTable: too many variables");
        for (const auto& s : names_)
            if (s == name) throw std::runtime_error("VarTable: duplicate symbol " + name);
        names_.push_back(name);
        roles_.push_back(role);
        return static_cast<int>(names_.size()) - 1;
    }
    int arity() const { return static_cast<int>(names_.size()); }
    const std::string& name(int i) const { return names_[i]; }
    VarRole role(int i) const { return roles_[i]; }
    int find(const std::string& name) const {
        for (int i = 0; i < arity(); ++i)
            if (names_[i] == name) return i;
        return -1;
    }
    Mono zero() const { return Mono::zero(arity()); }
    Mono unit(int var, int exp = 1) const { return Mono::unit(arity(), var, exp); }

private:
    std::vector<std::string> names_;
    std::vector<VarRole> roles_;
};

} // namespace hsl

#endif
