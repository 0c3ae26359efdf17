#pragma once

// Discretized Loewner flows: the chordal engine advances marked points by the
// exact one-step vertical-slit solution (frozen driving per step), the radial
// engine integrates the disk ODE with an implicit midpoint rule.  Both track
// first derivatives alongside values and detect swallowing.

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace slelab::flow {

using Complex = std::complex<double>;

struct RealPoint {
  std::string label;
  double g = 0.0;       // current image
  double deriv = 1.0;   // g'(z0), positive while alive
  int side = 0;         // sign of g - w at creation
  bool alive = true;
  double swallow_time = -1.0;
};

struct BulkPoint {
  std::string label;
  Complex g{0.0, 0.0};
  Complex deriv{1.0, 0.0};
  bool alive = true;
  double swallow_time = -1.0;
};

struct StepRecord {
  double dt = 0.0;
  double dw = 0.0;
};

class ChordalChain {
 public:
  ChordalChain(double w0, double dt_base);

  std::size_t add_real_point(std::string label, double x0);
  std::size_t add_bulk_point(std::string label, Complex z0);

  // Slit of capacity dt at the current driving value, then w += dw.
  void step(double dw, double dt);

  // Advance the marked points only, with the slit centred at `center`;
  // `skip_real` (if >= 0) exempts that real point (a growth seat advancing
  // itself).  Does not touch w or the history.
  void advance_marked(double center, double dt, long skip_real = -1);

  double t() const { return t_; }
  double w() const { return w_; }
  void set_w(double w) { w_ = w; }
  double dt_base() const { return dt_base_; }

  const std::vector<RealPoint>& real_points() const { return reals_; }
  const std::vector<BulkPoint>& bulk_points() const { return bulks_; }
  RealPoint& real_point(std::size_t i) { return reals_[i]; }
  BulkPoint& bulk_point(std::size_t i) { return bulks_[i]; }

  // Koebe-type estimate |g(z)-w|/|g'(z)|, within a factor 4 of the distance
  // from z to hull-union-R by the quarter theorem.
  double distance_proxy(std::size_t bulk_index) const;

  const std::vector<StepRecord>& history() const { return history_; }

  // Affine renormalization (z - w)/lambda applied to the whole state; exact
  // in law for scale-invariant driving.  Clears the step history.
  void rescale(double lambda);
  bool rescaled() const { return rescaled_; }

 private:
  void kill_real(std::size_t i);

  double t_ = 0.0, w_ = 0.0, dt_base_;
  std::vector<RealPoint> reals_;
  std::vector<BulkPoint> bulks_;
  std::vector<StepRecord> history_;
  bool rescaled_ = false;
};

// Trace points by reverse composition of the per-step slit maps, one entry
// per requested time (snapped down to step boundaries).
std::vector<Complex> trace_points(const std::vector<StepRecord>& history, double w0,
                                  const std::vector<double>& times);

// Driving serialization: CSV with header "t,w", one row per step.
void write_driving_csv(std::ostream& os, const std::vector<StepRecord>& history, double w0);
std::vector<StepRecord> read_driving_csv(std::istream& is, double* w0);

// ---------------------------------------------------------------------------
// Radial engine (unit disk, angles unwrapped)

struct AnglePoint {
  std::string label;
  double alpha = 0.0;  // boundary angle
  double logq = 0.0;   // log angular derivative
  bool alive = true;
  double swallow_time = -1.0;
};

struct DiskPoint {
  std::string label;
  Complex z{0.0, 0.0};
  Complex deriv{1.0, 0.0};
  bool alive = true;
};

class RadialChain {
 public:
  RadialChain(double theta0, double dt_base);

  std::size_t add_angle_point(std::string label, double alpha0);
  std::size_t add_disk_point(std::string label, Complex z0);

  // Flow of duration dt with the driving frozen, then theta += dtheta.
  void step(double dtheta, double dt);

  double t() const { return t_; }
  double theta() const { return theta_; }
  double conformal_radius0() const;  // exp(-t): |g'(0)| = e^t along the ODE
  double dt_base() const { return dt_base_; }

  const std::vector<AnglePoint>& angle_points() const { return angles_; }
  const std::vector<DiskPoint>& disk_points() const { return disks_; }
  AnglePoint& angle_point(std::size_t i) { return angles_[i]; }
  DiskPoint& disk_point(std::size_t i) { return disks_[i]; }

  // Conformal-radius proxy (1 - |g|^2)/|g'| for a bulk point.
  double radius_proxy(std::size_t disk_index) const;

  const std::vector<StepRecord>& history() const { return history_; }

 private:
  double t_ = 0.0, theta_;
  double dt_base_;
  std::vector<AnglePoint> angles_;
  std::vector<DiskPoint> disks_;
  std::vector<StepRecord> history_;
};

// Depth 1 - rho_tip of the constant-driving radial slit (closed form).
double radial_slit_depth(double duration);

// Polyline of the constant-driving radial slit (base on the circle first),
// spaced uniformly along the slit.
std::vector<Complex> radial_slit_polyline(double angle, double duration, int npoints);

}  // namespace slelab::flow
