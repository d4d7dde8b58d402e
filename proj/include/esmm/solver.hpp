#pragma once

#include "esmm/eigdissip.hpp"
#include "esmm/meshmover.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace esmm {

enum class FluxMode { EC, ES };
enum class MeshMode { Uniform, Moving, Prescribed };
enum class BcType { Periodic, Outflow, Reflecting, Inflow };

struct FaceBc {
  BcType type = BcType::Outflow;
  std::optional<Primitive> inflow;
};
using BcSet = std::array<std::array<FaceBc, 2>, 3>;

struct SolverConfig {
  int dim = 2;
  int nspecies = 1;
  int w = 3;
  FluxMode flux = FluxMode::ES;
  MeshMode mesh = MeshMode::Moving;
  double cfl = 0.4;
  double t_end = 1.0;
  bool accuracy_dt = false;
  BcSet bc{};
  MRWeights weights;
  MonitorSpec monitor;
  MoveParams move;
  Floors floors;
  bool gcl_check = false;
  long max_steps = 0;  // 0: no cap
  std::vector<double> output_times;

  void validate(const Index3& cells) const;
};

struct LineCut {
  Point3 a{0, 0, 0};
  Point3 b{0, 0, 0};
  int samples = 0;
};

struct CaseSpec {
  std::string name;
  std::string description;
  int dim = 2;
  Point3 lo{0, 0, 0};
  Point3 hi{1, 1, 1};
  Index3 cells{100, 100, 1};
  EosSpec eos;
  std::function<Primitive(const Point3&)> initial;
  std::function<Primitive(const Point3&, double)> exact;  // optional
  std::function<Point3(const Point3& xi, double t)> motion;  // optional prescribed mapping
  BcSet bc{};
  MonitorSpec monitor;
  MRWeights weights;
  double cfl = 0.4;
  double t_end = 1.0;
  std::function<double(const Primitive&)> schlieren_psi;
  std::vector<LineCut> line_cuts;
};

struct StepRecord {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double entropy = 0.0;          // Σ J η ΠΔξ
  double entropy_outflow = 0.0;  // cumulative numerical entropy flux through bounded faces
  double min_rho = 0.0;          // smallest partial density
  double min_pp = 0.0;           // smallest p + p∞
  double min_J = 0.0;
  double dtau = 1.0;
  double scl = 0.0;  // relative SCL residual, only with gcl_check

  double balance() const { return entropy + entropy_outflow; }
};

struct Diagnostics {
  std::vector<StepRecord> steps;
  double entropy_scale = 0.0;  // Σ J Σℓ c_vℓ ρℓ ΠΔξ at t = 0
  bool completed = false;
  std::string failure;
};

struct Rates {
  Field dJU;
  Field dJ;
  double entropy_outflow = 0.0;  // Σ over bounded faces of outward q̂ × face measure
};

struct ErrorNorms {
  double l1 = 0.0;
  double linf = 0.0;
};

class Solver {
 public:
  Solver(const CaseSpec& cs, const SolverConfig& cfg);

  const Lattice& lattice() const { return lat_; }
  const MeshBlock& mesh() const { return mesh_; }
  const Field& JU() const { return JU_; }
  const Field& J() const { return J_; }
  double time() const { return t_; }
  long steps() const { return nstep_; }
  const CaseSpec& case_spec() const { return case_; }
  const SolverConfig& config() const { return cfg_; }
  const EosSpec& eos() const { return case_.eos; }
  const MetricField& metrics() const { return metrics_; }
  const Field& monitor_field() const { return theta_; }

  /// Interior + ghost state U from (JU)/J; ghosts filled by apply_bc.
  Field state_with_ghosts(const Field& JU, const Field& J, const MetricField* mf, int stage = 0) const;
  Field current_state() const { return state_with_ghosts(JU_, J_, &metrics_); }
  Primitive primitive_at(int i, int j, int k) const;

  void apply_bc(Field& U, const MetricField* mf) const;
  Rates rhs(const Field& JU, const Field& J, const MetricField& mf, int stage = 0) const;
  Rates rhs_from_state(const Field& U, const MetricField& mf) const;
  double cfl_dt(const Field& U, const MetricField& mf, const Field& J) const;
  /// SSP-RK3 with the mesh moving linearly at the frozen velocity.
  void step_ssprk3(double dt);
  StepRecord advance(double t_stop);
  Diagnostics run(const std::function<void(const Solver&, const StepRecord&, bool output_due)>& observer = {});

  double total_entropy() const;
  double entropy_scale() const;
  StepRecord record() const;
  ErrorNorms density_error() const;  // ρ1 against the exact solution, if any
  Field schlieren() const;
  void set_velocity(const Field& xdot);
  void metric_refresh();

  /// Replace the state (tests).
  void set_state(const Field& JU, const Field& J) {
    JU_ = JU;
    J_ = J;
  }

 private:
  Field monitor_quantity(const std::string& q, const Field& U) const;
  void stage_mesh(double frac, double dt, MeshBlock& out) const;

  CaseSpec case_;
  SolverConfig cfg_;
  Lattice lat_;
  int nv_ = 0;
  MeshBlock mesh_;
  MetricField metrics_;
  Field JU_;
  Field J_;
  Field theta_;
  double t_ = 0.0;
  long nstep_ = 0;
  double outflow_ = 0.0;
  double last_dtau_ = 1.0;
  double last_dt_ = 0.0;
  double last_scl_ = 0.0;
};

/// Φ = exp(−Ψ|∇ρ|/max|∇ρ|) with the physical gradient.
Field schlieren(const Field& rho, const Field& psi, const MetricField& mf, const Field& J, const Lattice& lat);

}  // namespace esmm
