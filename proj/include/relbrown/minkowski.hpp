#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace relbrown {

/// Metric signature convention. MostlyPlus is diag(-1,1,1,1).
enum class Signature { MostlyPlus, MostlyMinus };

/// Causal character of a spacetime increment.
enum class Sector { Timelike, Spacelike, Lightlike };

inline const char* to_string(Sector s) {
    switch (s) {
        case Sector::Timelike: return "timelike";
        case Sector::Spacelike: return "spacelike";
        case Sector::Lightlike: return "lightlike";
    }
    return "?";
}

inline const char* to_string(Signature s) {
    return s == Signature::MostlyPlus ? "mostly-plus" : "mostly-minus";
}

/// Diagonal of the metric tensor under the given convention.
inline std::array<double, 4> metric_diagonal(Signature sig) {
    if (sig == Signature::MostlyPlus) return {-1.0, 1.0, 1.0, 1.0};
    return {1.0, -1.0, -1.0, -1.0};
}

/// Real spacetime vector (w0 = time component, w1..w3 spatial).
struct FourVector {
    std::array<double, 4> c{0.0, 0.0, 0.0, 0.0};

    FourVector() = default;
    FourVector(double t, double x, double y = 0.0, double z = 0.0) : c{t, x, y, z} {}

    double& operator[](std::size_t i) { return c[i]; }
    double operator[](std::size_t i) const { return c[i]; }

    FourVector& operator+=(const FourVector& o) {
        for (int i = 0; i < 4; ++i) c[i] += o.c[i];
        return *this;
    }
    friend FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
    friend FourVector operator-(const FourVector& a, const FourVector& b) {
        return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
    }
    friend FourVector operator*(double s, const FourVector& v) {
        return {s * v[0], s * v[1], s * v[2], s * v[3]};
    }

    bool finite() const {
        for (double x : c)
            if (!std::isfinite(x)) return false;
        return true;
    }
};

using Mat4 = std::array<std::array<double, 4>, 4>;

inline Mat4 zero_mat4() {
    Mat4 m{};
    return m;
}

inline Mat4 metric_tensor(Signature sig) {
    Mat4 m = zero_mat4();
    auto d = metric_diagonal(sig);
    for (int i = 0; i < 4; ++i) m[i][i] = d[i];
    return m;
}

inline Mat4 mat_mul(const Mat4& a, const Mat4& b) {
    Mat4 r = zero_mat4();
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k)
            for (int j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Mat4 transpose(const Mat4& a) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r[i][j] = a[j][i];
    return r;
}

/// eta_{mu nu} v^mu v^nu; the invariant interval squared of v.
inline double norm_squared(const FourVector& v, Signature sig) {
    auto d = metric_diagonal(sig);
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += d[i] * v[i] * v[i];
    return s;
}

/// Sector of an increment. Lightlike iff |interval^2| <= tol; the sector
/// assignment itself does not depend on the convention.
inline Sector classify(const FourVector& v, Signature sig, double tol = 1e-12) {
    if (tol < 0.0) throw std::invalid_argument("classify: tol must be >= 0");
    double n = norm_squared(v, sig);
    if (std::abs(n) <= tol) return Sector::Lightlike;
    bool time_dominates = (sig == Signature::MostlyPlus) ? (n < 0.0) : (n > 0.0);
    return time_dominates ? Sector::Timelike : Sector::Spacelike;
}

/// Pure boost, parametrized by rapidity and a unit spatial axis.
struct Boost {
    double rapidity = 0.0;
    std::array<double, 3> axis{1.0, 0.0, 0.0};

    void validate() const {
        if (!std::isfinite(rapidity)) throw std::invalid_argument("Boost: rapidity not finite");
        double n2 = axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2];
        if (std::abs(n2 - 1.0) > 1e-12) throw std::invalid_argument("Boost: axis not normalized");
    }
};

/// Matrix of the active boost. Sign convention: boosting (1,0,0,0) by
/// rapidity chi along x gives (cosh chi, -sinh chi, 0, 0).
inline Mat4 boost_matrix(const Boost& b) {
    b.validate();
    double ch = std::cosh(b.rapidity);
    double sh = std::sinh(b.rapidity);
    const auto& n = b.axis;
    Mat4 m = zero_mat4();
    m[0][0] = ch;
    for (int i = 0; i < 3; ++i) {
        m[0][i + 1] = -sh * n[i];
        m[i + 1][0] = -sh * n[i];
        for (int j = 0; j < 3; ++j) m[i + 1][j + 1] = (i == j ? 1.0 : 0.0) + (ch - 1.0) * n[i] * n[j];
    }
    return m;
}

inline FourVector boost_vector(const FourVector& v, const Boost& b) {
    Mat4 m = boost_matrix(b);
    FourVector r;
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += m[i][j] * v[j];
        r[i] = s;
    }
    return r;
}

/// Lambda T Lambda^T for a rank-2 contravariant tensor.
inline Mat4 boost_tensor(const Mat4& t, const Boost& b) {
    Mat4 m = boost_matrix(b);
    return mat_mul(mat_mul(m, t), transpose(m));
}

}  // namespace relbrown
