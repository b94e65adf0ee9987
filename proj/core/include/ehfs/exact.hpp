#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ehfs/model.hpp"

namespace ehfs {

struct ExactNodeSpec {
  int payload = 0;               // lambda_i, packets
  double energy_initial = 0.0;   // E_i^0, J
  std::vector<double> prr;       // q_i^f, one entry per frame
  std::vector<double> harvest;   // delta E_{i,f}, J, one entry per frame
};

/// A complete small scheduling instance. E_td lives in `constants`;
/// kappa = 0 disables the fairness constraint (useful for tests).
struct ExactInstance {
  int n = 0;
  int s = 0;
  int f_max = 0;
  double kappa = 0.5;
  EnergyConstants constants;
  std::vector<ExactNodeSpec> nodes;
  int search_budget = 64;  // max n * s * f_max

  void validate() const;
  bool within_budget() const { return n * s * f_max <= search_budget; }
};

/// Boolean transmission tensor x[node][slot][frame] plus the per-frame
/// RCAP indicators phi[node][frame]. All indices 1-based.
class ExactAssignment {
 public:
  ExactAssignment() = default;
  ExactAssignment(int n, int s, int f_max);

  bool x(int node, int slot, int frame) const;
  void set_x(int node, int slot, int frame, bool v);
  bool phi(int node, int frame) const;
  void set_phi(int node, int frame, bool v);

  int n() const { return n_; }
  int s() const { return s_; }
  int f_max() const { return f_; }

 private:
  int n_ = 0, s_ = 0, f_ = 0;
  std::vector<unsigned char> x_;
  std::vector<unsigned char> phi_;
};

struct ConstraintSlack {
  std::string name;   // "cons1" .. "cons10"
  double slack = 0.0; // negative means violated
};

/// Evaluates all ten constraints against an assignment. Harvested
/// energy is credited (added), and the payload-stop bookkeeping is
/// checked through the derived rule: phi is 1 up to and including the
/// frame in which the node's cumulative delivery first reaches its
/// payload, 0 strictly after.
std::vector<ConstraintSlack> check_feasible(const ExactInstance& inst,
                                            const ExactAssignment& a);

bool all_satisfied(const std::vector<ConstraintSlack>& slacks,
                   double tol = 1e-9);

enum class SolveStatus { Optimal, Infeasible };

struct ExactSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  ExactAssignment assignment;
  std::vector<double> alpha;            // per-node delivered packets
  std::vector<ConstraintSlack> slacks;  // certificate for the assignment
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive branch-and-bound over per-frame slot allocations.
/// Maximizes total received packets over all feasible assignments;
/// returns Infeasible when the fairness requirement cannot be met.
/// Throws BudgetExceeded when n*s*f_max is over the search budget —
/// never a silent approximation.
ExactSolution solve_exact(const ExactInstance& inst);

/// (exact - heuristic) / exact. Requires exact > 0.
double gap(double heuristic_value, double exact_value);

/// Objective of an assignment under the instance's PRRs, using the
/// solver's own summation order. Shape mismatch is rejected.
double evaluate_objective(const ExactInstance& inst,
                          const ExactAssignment& a);

/// Derives the RCAP indicators from a transmission tensor: phi turns
/// off strictly after the frame in which the node's cumulative
/// delivery first reaches its payload (1e-9 tolerance).
void derive_phi(const ExactInstance& inst, ExactAssignment& a);

/// Flat text form, the CLI `oracle` input. Line-oriented key/value
/// pairs; `q` and `harvest` take one value per frame or a single value
/// broadcast to all frames. '#' starts a comment.
ExactInstance parse_instance_text(const std::string& text);
ExactInstance load_instance(const std::string& path);
std::string format_instance_text(const ExactInstance& inst);

}  // namespace ehfs
