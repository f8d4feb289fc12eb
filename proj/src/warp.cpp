#include "spectun/warp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "spectun/errors.hpp"

namespace spectun {
namespace {

double fd_step(double r) { return std::max(1e-5, std::abs(r) * 1e-7); }

}  // namespace

WarpProfile WarpProfile::from_callables(WarpDomain domain, std::string name, Fn phi,
                                        Fn dphi, Fn ddphi, Fn dddphi) {
    if (!phi) throw DomainError("WarpProfile: phi callable required");
    WarpProfile w;
    w.domain_ = domain;
    w.name_ = std::move(name);
    w.phi_ = std::move(phi);
    w.dphi_ = std::move(dphi);
    w.ddphi_ = std::move(ddphi);
    w.dddphi_ = std::move(dddphi);
    if (w.length() <= 0.0) throw DomainError("WarpProfile: empty domain");
    return w;
}

WarpProfile WarpProfile::euclidean(double r_max) {
    if (!(r_max > 0)) throw DomainError("euclidean: r_max must be > 0");
    return from_callables(Interval{0.0, r_max, EndKind::Pole, EndKind::Boundary},
                          "euclidean",
                          [](double r) { return r; }, [](double) { return 1.0; },
                          [](double) { return 0.0; }, [](double) { return 0.0; });
}

WarpProfile WarpProfile::sphere(double curvature) {
    if (!(curvature > 0)) throw DomainError("sphere: curvature must be > 0");
    const double k = std::sqrt(curvature);
    return from_callables(
        Interval{0.0, std::numbers::pi / k, EndKind::Pole, EndKind::Pole}, "sphere",
        [k](double r) { return std::sin(k * r) / k; },
        [k](double r) { return std::cos(k * r); },
        [k](double r) { return -k * std::sin(k * r); },
        [k](double r) { return -k * k * std::cos(k * r); });
}

WarpProfile WarpProfile::hyperbolic_cap(double r_max, double curvature) {
    if (!(curvature < 0)) throw DomainError("hyperbolic_cap: curvature must be < 0");
    if (!(r_max > 0)) throw DomainError("hyperbolic_cap: r_max must be > 0");
    const double k = std::sqrt(-curvature);
    return from_callables(
        Interval{0.0, r_max, EndKind::Pole, EndKind::Boundary}, "hyperbolic-cap",
        [k](double r) { return std::sinh(k * r) / k; },
        [k](double r) { return std::cosh(k * r); },
        [k](double r) { return k * std::sinh(k * r); },
        [k](double r) { return k * k * std::cosh(k * r); });
}

WarpProfile WarpProfile::space_form(double curvature, double r_max) {
    if (curvature > 0) {
        WarpProfile w = sphere(curvature);
        if (r_max > w.r_max())
            throw DomainError("space_form: r_max exceeds the sphere diameter");
        return w;
    }
    if (curvature < 0) return hyperbolic_cap(r_max, curvature);
    return euclidean(r_max);
}

WarpProfile WarpProfile::cylinder(double length) {
    if (!(length > 0)) throw DomainError("cylinder: length must be > 0");
    return from_callables(Circle{length}, "cylinder", [](double) { return 1.0; },
                          [](double) { return 0.0; }, [](double) { return 0.0; },
                          [](double) { return 0.0; });
}

WarpProfile WarpProfile::warped_circle(double length, double amplitude) {
    if (!(length > 0)) throw DomainError("warped_circle: length must be > 0");
    if (!(std::abs(amplitude) < 1.0))
        throw DomainError("warped_circle: |amplitude| must be < 1 to keep phi > 0");
    const double om = 2.0 * std::numbers::pi / length;
    return from_callables(
        Circle{length}, "warped-circle",
        [amplitude, om](double r) { return 1.0 + amplitude * std::cos(om * r); },
        [amplitude, om](double r) { return -amplitude * om * std::sin(om * r); },
        [amplitude, om](double r) { return -amplitude * om * om * std::cos(om * r); },
        [amplitude, om](double r) { return amplitude * om * om * om * std::sin(om * r); });
}

WarpProfile WarpProfile::from_samples(WarpDomain domain, std::string name,
                                      std::vector<double> r, std::vector<double> phi) {
    WarpProfile w;
    w.domain_ = domain;
    w.name_ = std::move(name);
    w.sampled_.emplace(std::move(r), std::move(phi));
    if (w.length() <= 0.0) throw DomainError("WarpProfile: empty domain");
    return w;
}

double WarpProfile::phi(double r) const {
    double x = r;
    ensure_inside(x);
    if (sampled_) return sampled_->eval(x);
    return phi_(x);
}

double WarpProfile::dphi(double r) const {
    double x = r;
    ensure_inside(x);
    if (sampled_) return sampled_->deriv(x);
    if (dphi_) return dphi_(x);
    const double h = fd_step(x);
    return (-phi(x + 2 * h) + 8 * phi(x + h) - 8 * phi(x - h) + phi(x - 2 * h)) / (12 * h);
}

double WarpProfile::ddphi(double r) const {
    double x = r;
    ensure_inside(x);
    if (sampled_) return sampled_->deriv2(x);
    if (ddphi_) return ddphi_(x);
    const double h = fd_step(x);
    return (-phi(x + 2 * h) + 16 * phi(x + h) - 30 * phi(x) + 16 * phi(x - h) -
            phi(x - 2 * h)) /
           (12 * h * h);
}

double WarpProfile::dddphi(double r) const {
    double x = r;
    ensure_inside(x);
    if (sampled_)
        throw DomainError("WarpProfile: sampled tables carry no third derivative");
    if (dddphi_) return dddphi_(x);
    const double h = std::max(1e-4, std::abs(x) * 1e-6);
    return (phi(x + 2 * h) - 2 * phi(x + h) + 2 * phi(x - h) - phi(x - 2 * h)) /
           (2 * h * h * h);
}

bool WarpProfile::closed() const {
    if (is_circle()) return true;
    const auto& iv = std::get<Interval>(domain_);
    return iv.left == EndKind::Pole && iv.right == EndKind::Pole;
}

double WarpProfile::r_min() const {
    if (is_circle()) return 0.0;
    return std::get<Interval>(domain_).r_min;
}

double WarpProfile::r_max() const {
    if (is_circle()) return std::get<Circle>(domain_).length;
    return std::get<Interval>(domain_).r_max;
}

std::vector<double> WarpProfile::poles() const {
    std::vector<double> p;
    if (is_circle()) return p;
    const auto& iv = std::get<Interval>(domain_);
    if (iv.left == EndKind::Pole) p.push_back(iv.r_min);
    if (iv.right == EndKind::Pole) p.push_back(iv.r_max);
    return p;
}

double WarpProfile::distance_to_pole(double r) const {
    double d = std::numeric_limits<double>::infinity();
    for (double p : poles()) d = std::min(d, std::abs(r - p));
    return d;
}

double WarpProfile::wrap(double r) const {
    if (!is_circle()) return r;
    const double L = std::get<Circle>(domain_).length;
    double x = std::fmod(r, L);
    if (x < 0) x += L;
    return x;
}

void WarpProfile::ensure_inside(double& r) const {
    if (is_circle()) {
        r = wrap(r);
        return;
    }
    const auto& iv = std::get<Interval>(domain_);
    const double slack = 1e-9 * (1.0 + std::abs(iv.r_min) + std::abs(iv.r_max));
    if (r < iv.r_min - slack || r > iv.r_max + slack) {
        std::ostringstream os;
        os << "WarpProfile '" << name_ << "': r=" << r << " outside [" << iv.r_min
           << ", " << iv.r_max << "]";
        throw DomainError(os.str());
    }
    r = std::clamp(r, iv.r_min, iv.r_max);
}

double WarpProfile::cap_c3(double pole) const {
    const auto ps = poles();
    bool found = false;
    for (double p : ps) found = found || std::abs(p - pole) < 1e-12;
    if (!found) throw DomainError("cap_c3: not a pole of this profile");
    const double sign = (std::abs(pole - r_min()) < std::abs(pole - r_max())) ? 1.0 : -1.0;
    if (dddphi_ && !sampled_) {
        // d^3/ds^3 phi(pole + sign*s) = sign^3 phi''' = sign * phi'''.
        return sign * dddphi_(pole) / 6.0;
    }
    auto est = [&](double s) { return (phi(pole + sign * s) - s) / (s * s * s); };
    const double s0 = std::min(1e-2, 0.25 * length());
    return (4.0 * est(0.5 * s0) - est(s0)) / 3.0;  // Richardson on the O(s^2) error
}

WarpProfile::Check WarpProfile::validate(int grid) const {
    Check c;
    std::ostringstream os;
    const double a = r_min(), b = r_max();
    for (int i = 1; i < grid; ++i) {
        const double r = a + (b - a) * i / grid;
        if (!(phi(r) > 0.0)) {
            c.ok = false;
            os << "phi <= 0 at r=" << r << "; ";
            break;
        }
    }
    if (!is_circle()) {
        const auto& iv = std::get<Interval>(domain_);
        if (iv.left == EndKind::Pole) {
            if (std::abs(phi(a)) > 1e-9) { c.ok = false; os << "left cap: phi(r_min) != 0; "; }
            if (std::abs(dphi(a) - 1.0) > 1e-6) { c.ok = false; os << "left cap: phi' != 1; "; }
        } else if (!(phi(a) > 0.0)) {
            c.ok = false;
            os << "open left end needs phi > 0; ";
        }
        if (iv.right == EndKind::Pole) {
            if (std::abs(phi(b)) > 1e-9) { c.ok = false; os << "right cap: phi(r_max) != 0; "; }
            if (std::abs(dphi(b) + 1.0) > 1e-6) { c.ok = false; os << "right cap: phi' != -1; "; }
        } else if (!(phi(b) > 0.0)) {
            c.ok = false;
            os << "open right end needs phi > 0; ";
        }
    } else {
        if (std::abs(phi(0.0) - phi(b)) > 1e-9 * (1.0 + std::abs(phi(0.0)))) {
            c.ok = false;
            os << "circle profile does not close up; ";
        }
    }
    c.detail = os.str();
    return c;
}

}  // namespace spectun
