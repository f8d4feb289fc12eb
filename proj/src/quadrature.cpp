#include "spectun/quadrature.hpp"

#include <cmath>

#include "spectun/errors.hpp"

namespace spectun {
namespace {

// Kronrod 15 abscissae on [-1,1]; odd-indexed entries are the Gauss 7 nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
};

PanelResult gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);
    double resk = kWgk[7] * fv[7];
    double resg = kWg[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += kWgk[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double abs_tol, double rel_tol, int depth) {
    const auto p = gauss_kronrod(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(p.value));
    if (p.error <= tol || b - a < 1e-14 * (std::abs(a) + std::abs(b) + 1.0)) return p.value;
    if (depth > 60)
        throw ConstructionError("integrate: recursion depth exceeded before tolerance was met");
    const double m = 0.5 * (a + b);
    return adaptive(f, a, m, 0.5 * abs_tol, rel_tol, depth + 1) +
           adaptive(f, m, b, 0.5 * abs_tol, rel_tol, depth + 1);
}

constexpr double kXg8[4] = {
    0.183434642495649804939476142360184,
    0.525532409916328985817739049189246,
    0.796666477413626739591553936475830,
    0.960289856497536231683560868569473};

constexpr double kWg8[4] = {
    0.362683783378361982965150449277196,
    0.313706645877887287337962201986601,
    0.222381034453374470544355994426241,
    0.101228536290376259152531354309962};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, abs_tol, rel_tol);
    return adaptive(f, a, b, abs_tol, rel_tol, 0);
}

double gauss8(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += kWg8[i] * (f(c - h * kXg8[i]) + f(c + h * kXg8[i]));
    return s * h;
}

}  // namespace spectun
