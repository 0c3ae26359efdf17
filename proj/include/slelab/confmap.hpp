#pragma once

// Closed-form elementary hull maps in the half-plane and disk, ordered
// compositions representing phi_A, cocycle evaluation and multiplicativity
// checks, and zipper-style hull removal from boundary polylines.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace slelab::confmap {

using Complex = std::complex<double>;

// phi removing a hull, hydrodynamically normalized: phi(z) = z + c/z + ...
// - vertical_slit(base, cap): removes [base, base + 2i sqrt(cap)], c = 2 cap
// - half_disk(center, radius): z + radius^2/(z - center), c = radius^2
// - radial_slit(angle, duration): disk hull grown by the constant-driving
//   radial Loewner flow (no simple closed form; evaluated by integration)
class ElementaryMap {
 public:
  enum class Kind { kVerticalSlit, kHalfDisk, kRadialSlit };

  static ElementaryMap vertical_slit(double base, double cap);
  static ElementaryMap half_disk(double center, double radius);
  static ElementaryMap radial_slit(double angle, double duration);

  Kind kind() const { return kind_; }
  double capacity() const;  // chordal kinds: the 1/z coefficient

  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;
  Complex inverse(Complex w) const;  // chordal kinds only

  double param_a() const { return a_; }
  double param_b() const { return b_; }

 private:
  ElementaryMap(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
  Kind kind_;
  double a_, b_;
};

struct CompositeMap {
  std::vector<ElementaryMap> steps;  // phi_{A.B} = phi_B . phi_A: apply in order

  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;
  // phi(z) - z accumulated per step; stable far from the hulls where direct
  // subtraction cancels catastrophically.
  Complex tail(Complex z) const;
  double capacity() const;

  CompositeMap then(const CompositeMap& later) const;  // concatenation A.B
};

// Numeric weight data for the general cocycle C(A, z).
struct CocycleWeights {
  // nu[{i,j}] with i < j indexing into the point list; f optional on points.
  std::vector<std::pair<std::pair<int, int>, double>> nu;
  std::function<double(const std::vector<double>&)> f;  // nullable
};

// c_ij(A) = phi'(z_i) phi'(z_j) ((z_j - z_i)/(phi(z_j) - phi(z_i)))^2
double cocycle_cij(const CompositeMap& map, double zi, double zj);

double cocycle_general(const CompositeMap& map, const CocycleWeights& weights,
                       const std::vector<double>& z);

// |C(A.B, z) - C(A, z) C(B, phi_A(z))|
double check_multiplicativity(const CompositeMap& a, const CompositeMap& b,
                              const CocycleWeights& weights, const std::vector<double>& z);

// --------------------------------------------------------------------------
// Zipper-style hull removal.  Given an ordered boundary polyline of a hull
// (from one real base point through the arc in H), composes one vertical
// slit map per point; the result approximates phi_A with error vanishing as
// the spacing does.

CompositeMap zip_hull(const std::vector<Complex>& arc);

// Radial hull removal for the unit disk: polyline from the circle into U.
// The returned map fixes 0 with positive real derivative.
class DiskMap {
 public:
  static DiskMap zip(const std::vector<Complex>& arc);

  Complex eval(Complex z) const;
  Complex deriv(Complex z) const;
  double deriv0() const;  // phi'(0) > 0

 private:
  Complex m_upper_eval(Complex rot) const;

  double prerot_ = 0.0;   // rotate arc base towards +1 before the Cayley map
  CompositeMap upper_;    // chordal zipper acting in H
  double shift_ = 0.0, scale_ = 1.0;  // Moebius renormalization in H
  Complex postrot_{1.0, 0.0};
};

}  // namespace slelab::confmap
