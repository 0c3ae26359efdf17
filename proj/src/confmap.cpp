#include "slelab/confmap.hpp"

#include <cmath>
#include <stdexcept>

namespace slelab::confmap {

namespace {

constexpr double kSwallowTol = 1e-13;

// Principal sqrt of 1 + q, with the branch cut exactly on the removed slit.
Complex slit_sqrt_factor(Complex dz, double cap4) {
  Complex arg = 1.0 + cap4 / (dz * dz);
  if (std::abs(arg.imag()) < kSwallowTol * (1.0 + std::abs(arg.real())) &&
      arg.real() <= 0.0) {
    throw std::domain_error("confmap: point lies on the removed slit");
  }
  return std::sqrt(arg);
}

Complex cayley(Complex z) { return Complex(0, 1) * (1.0 - z) / (1.0 + z); }
Complex cayley_deriv(Complex z) {
  Complex d = 1.0 + z;
  return Complex(0, -2) / (d * d);
}
Complex cayley_inv(Complex w) { return (Complex(0, 1) - w) / (Complex(0, 1) + w); }
Complex cayley_inv_deriv(Complex w) {
  Complex d = Complex(0, 1) + w;
  return Complex(0, -2) / (d * d);
}

// One implicit-midpoint step of the radial Loewner ODE with frozen driving.
Complex radial_ode_rhs(Complex z, Complex xi) { return -z * (z + xi) / (z - xi); }

}  // namespace

// ---------------------------------------------------------------------------
// ElementaryMap

ElementaryMap ElementaryMap::vertical_slit(double base, double cap) {
  if (cap <= 0.0) throw std::invalid_argument("confmap: slit needs positive capacity");
  return ElementaryMap(Kind::kVerticalSlit, base, cap);
}

ElementaryMap ElementaryMap::half_disk(double center, double radius) {
  if (radius <= 0.0) throw std::invalid_argument("confmap: half-disk needs positive radius");
  return ElementaryMap(Kind::kHalfDisk, center, radius);
}

ElementaryMap ElementaryMap::radial_slit(double angle, double duration) {
  if (duration <= 0.0) throw std::invalid_argument("confmap: radial slit needs duration > 0");
  return ElementaryMap(Kind::kRadialSlit, angle, duration);
}

double ElementaryMap::capacity() const {
  switch (kind_) {
    case Kind::kVerticalSlit:
      return 2.0 * b_;
    case Kind::kHalfDisk:
      return b_ * b_;
    case Kind::kRadialSlit:
      throw std::logic_error("confmap: half-plane capacity undefined for radial slits");
  }
  return 0.0;
}

Complex ElementaryMap::eval(Complex z) const {
  switch (kind_) {
    case Kind::kVerticalSlit: {
      Complex dz = z - a_;
      if (std::abs(dz) < kSwallowTol) {
        throw std::domain_error("confmap: slit base point is swallowed");
      }
      return a_ + dz * slit_sqrt_factor(dz, 4.0 * b_);
    }
    case Kind::kHalfDisk: {
      Complex dz = z - a_;
      if (std::abs(dz) <= b_ * (1.0 + 1e-12) && z.imag() > -1e-12) {
        throw std::domain_error("confmap: point inside the removed half-disk");
      }
      return z + b_ * b_ / dz;
    }
    case Kind::kRadialSlit: {
      Complex xi = std::polar(1.0, a_);
      int n = std::max(64, static_cast<int>(b_ / 2e-4));
      double dt = b_ / n;
      Complex w = z;
      for (int i = 0; i < n; ++i) {
        Complex mid = w;
        for (int it = 0; it < 3; ++it) {
          mid = w + 0.5 * dt * radial_ode_rhs(mid, xi);
        }
        if (std::abs(mid - xi) < 1e-9) {
          throw std::domain_error("confmap: point swallowed by the radial slit");
        }
        w = w + dt * radial_ode_rhs(mid, xi);
      }
      return w;
    }
  }
  return z;
}

Complex ElementaryMap::deriv(Complex z) const {
  switch (kind_) {
    case Kind::kVerticalSlit: {
      Complex dz = z - a_;
      Complex w = dz * slit_sqrt_factor(dz, 4.0 * b_);
      return dz / w;
    }
    case Kind::kHalfDisk: {
      Complex dz = z - a_;
      return 1.0 - b_ * b_ / (dz * dz);
    }
    case Kind::kRadialSlit: {
      Complex xi = std::polar(1.0, a_);
      int n = std::max(64, static_cast<int>(b_ / 2e-4));
      double dt = b_ / n;
      Complex w = z, logd = 0.0;
      for (int i = 0; i < n; ++i) {
        Complex mid = w;
        for (int it = 0; it < 3; ++it) {
          mid = w + 0.5 * dt * radial_ode_rhs(mid, xi);
        }
        Complex d = mid - xi;
        logd += dt * (-(mid * mid - 2.0 * xi * mid - xi * xi) / (d * d));
        w = w + dt * radial_ode_rhs(mid, xi);
      }
      return std::exp(logd);
    }
  }
  return 1.0;
}

Complex ElementaryMap::inverse(Complex w) const {
  switch (kind_) {
    case Kind::kVerticalSlit: {
      Complex dw = w - a_;
      Complex arg = 1.0 - 4.0 * b_ / (dw * dw);
      return a_ + dw * std::sqrt(arg);
    }
    case Kind::kHalfDisk: {
      Complex dw = w - a_;
      Complex s = dw * std::sqrt(1.0 - 4.0 * b_ * b_ / (dw * dw));
      return a_ + (dw + s) / 2.0;
    }
    case Kind::kRadialSlit:
      throw std::logic_error("confmap: radial slit inverse not provided");
  }
  return w;
}

// ---------------------------------------------------------------------------
// CompositeMap

Complex CompositeMap::eval(Complex z) const {
  for (const auto& s : steps) z = s.eval(z);
  return z;
}

Complex CompositeMap::deriv(Complex z) const {
  Complex d = 1.0;
  for (const auto& s : steps) {
    d *= s.deriv(z);
    z = s.eval(z);
  }
  return d;
}

Complex CompositeMap::tail(Complex z) const {
  Complex acc = 0.0;
  for (const auto& s : steps) {
    Complex t;
    switch (s.kind()) {
      case ElementaryMap::Kind::kVerticalSlit: {
        // phi(z) - z = dz (sqrt(1+q) - 1) = dz q / (sqrt(1+q) + 1)
        Complex dz = z - s.param_a();
        Complex q = 4.0 * s.param_b() / (dz * dz);
        t = dz * q / (std::sqrt(1.0 + q) + 1.0);
        break;
      }
      case ElementaryMap::Kind::kHalfDisk: {
        t = s.param_b() * s.param_b() / (z - s.param_a());
        break;
      }
      default:
        t = s.eval(z) - z;
    }
    acc += t;
    z = z + t;
  }
  return acc;
}

double CompositeMap::capacity() const {
  double c = 0.0;
  for (const auto& s : steps) c += s.capacity();
  return c;
}

CompositeMap CompositeMap::then(const CompositeMap& later) const {
  CompositeMap out = *this;
  out.steps.insert(out.steps.end(), later.steps.begin(), later.steps.end());
  return out;
}

// ---------------------------------------------------------------------------
// Cocycles

namespace {

double real_checked(Complex v, const char* what) {
  if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real()))) {
    throw std::logic_error(std::string("confmap: expected a real value in ") + what);
  }
  return v.real();
}

}  // namespace

double cocycle_cij(const CompositeMap& map, double zi, double zj) {
  if (zi == zj) throw std::invalid_argument("confmap: cocycle needs distinct points");
  double di = real_checked(map.deriv(Complex(zi, 0.0)), "cocycle derivative");
  double dj = real_checked(map.deriv(Complex(zj, 0.0)), "cocycle derivative");
  double fi = real_checked(map.eval(Complex(zi, 0.0)), "cocycle value");
  double fj = real_checked(map.eval(Complex(zj, 0.0)), "cocycle value");
  double ratio = (zj - zi) / (fj - fi);
  return di * dj * ratio * ratio;
}

double cocycle_general(const CompositeMap& map, const CocycleWeights& weights,
                       const std::vector<double>& z) {
  double c = 1.0;
  for (const auto& [ij, nu] : weights.nu) {
    c *= std::pow(cocycle_cij(map, z[static_cast<std::size_t>(ij.first)],
                              z[static_cast<std::size_t>(ij.second)]),
                  nu);
  }
  if (weights.f) {
    std::vector<double> mapped(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      mapped[i] = real_checked(map.eval(Complex(z[i], 0.0)), "cocycle point");
    }
    c *= weights.f(mapped) / weights.f(z);
  }
  return c;
}

double check_multiplicativity(const CompositeMap& a, const CompositeMap& b,
                              const CocycleWeights& weights, const std::vector<double>& z) {
  CompositeMap ab = a.then(b);
  double lhs = cocycle_general(ab, weights, z);
  std::vector<double> az(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    az[i] = real_checked(a.eval(Complex(z[i], 0.0)), "multiplicativity point");
  }
  double rhs = cocycle_general(a, weights, z) * cocycle_general(b, weights, az);
  return std::abs(lhs - rhs);
}

// ---------------------------------------------------------------------------
// Zippers

CompositeMap zip_hull(const std::vector<Complex>& arc) {
  CompositeMap out;
  std::vector<Complex> img = arc;
  for (std::size_t k = 0; k < img.size(); ++k) {
    double v = img[k].imag();
    if (v <= 1e-12) continue;  // already absorbed or a real base point
    ElementaryMap slit = ElementaryMap::vertical_slit(img[k].real(), v * v / 4.0);
    out.steps.push_back(slit);
    for (std::size_t j = k + 1; j < img.size(); ++j) {
      if (img[j].imag() <= 1e-12) {
        img[j] = Complex(slit.eval(Complex(img[j].real(), 0.0)).real(), 0.0);
      } else {
        try {
          img[j] = slit.eval(img[j]);
        } catch (const std::domain_error&) {
          img[j] = Complex(img[j].real(), 0.0);  // grazed the slit: treat as absorbed
        }
      }
    }
  }
  return out;
}

DiskMap DiskMap::zip(const std::vector<Complex>& arc) {
  if (arc.empty()) throw std::invalid_argument("confmap: empty arc");
  DiskMap m;
  m.prerot_ = -std::arg(arc.front());
  std::vector<Complex> harc;
  harc.reserve(arc.size());
  for (Complex z : arc) {
    Complex rot = z * std::polar(1.0, m.prerot_);
    Complex h = cayley(rot);
    if (h.imag() < 0.0) h = Complex(h.real(), 0.0);
    harc.push_back(h);
  }
  m.upper_ = zip_hull(harc);
  Complex w0 = m.upper_.eval(Complex(0.0, 1.0));  // image of the disk center
  m.shift_ = w0.real();
  m.scale_ = w0.imag();
  if (m.scale_ <= 0.0) throw std::logic_error("confmap: disk zipper degenerated");
  m.postrot_ = 1.0;
  Complex d0 = m.deriv(Complex(0.0, 0.0));
  m.postrot_ = std::conj(d0) / std::abs(d0);
  return m;
}

Complex DiskMap::eval(Complex z) const {
  Complex rot = z * std::polar(1.0, prerot_);
  Complex w = m_upper_eval(rot);
  return postrot_ * cayley_inv(w);
}

Complex DiskMap::m_upper_eval(Complex rot) const {
  Complex w = upper_.eval(cayley(rot));
  return (w - shift_) / scale_;
}

Complex DiskMap::deriv(Complex z) const {
  Complex rot = z * std::polar(1.0, prerot_);
  Complex c = cayley(rot);
  Complex w = upper_.eval(c);
  Complex wn = (w - shift_) / scale_;
  Complex d = std::polar(1.0, prerot_) * cayley_deriv(rot) * upper_.deriv(c) / scale_ *
              cayley_inv_deriv(wn) * postrot_;
  return d;
}

double DiskMap::deriv0() const {
  Complex d = deriv(Complex(0.0, 0.0));
  return std::abs(d);
}

}  // namespace slelab::confmap
