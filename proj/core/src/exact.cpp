#include "ehfs/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace ehfs {

void ExactInstance::validate() const {
  if (n < 1 || s < 1 || f_max < 1) {
    throw std::invalid_argument("instance: n, s and f_max must be >= 1");
  }
  if (kappa < 0.0 || kappa > 1.0) {
    throw std::invalid_argument("instance: kappa must be in [0, 1]");
  }
  constants.validate();
  if (static_cast<int>(nodes.size()) != n) {
    throw std::invalid_argument("instance: node count does not match n");
  }
  for (const ExactNodeSpec& node : nodes) {
    if (node.payload < 0 || node.energy_initial < 0.0) {
      throw std::invalid_argument("instance: negative payload or energy");
    }
    if (static_cast<int>(node.prr.size()) != f_max ||
        static_cast<int>(node.harvest.size()) != f_max) {
      throw std::invalid_argument(
          "instance: q and harvest need one entry per frame");
    }
    for (double q : node.prr) {
      if (q < 0.0 || q > 1.0) {
        throw std::invalid_argument("instance: q must be in [0, 1]");
      }
    }
    for (double h : node.harvest) {
      if (h < 0.0) {
        throw std::invalid_argument("instance: harvest must be >= 0");
      }
    }
  }
}

ExactAssignment::ExactAssignment(int n, int s, int f_max)
    : n_(n), s_(s), f_(f_max),
      x_(static_cast<size_t>(n) * s * f_max, 0),
      phi_(static_cast<size_t>(n) * f_max, 0) {}

bool ExactAssignment::x(int node, int slot, int frame) const {
  return x_[((static_cast<size_t>(frame) - 1) * s_ + (slot - 1)) * n_ +
            (node - 1)] != 0;
}

void ExactAssignment::set_x(int node, int slot, int frame, bool v) {
  x_[((static_cast<size_t>(frame) - 1) * s_ + (slot - 1)) * n_ + (node - 1)] =
      v ? 1 : 0;
}

bool ExactAssignment::phi(int node, int frame) const {
  return phi_[(static_cast<size_t>(frame) - 1) * n_ + (node - 1)] != 0;
}

void ExactAssignment::set_phi(int node, int frame, bool v) {
  phi_[(static_cast<size_t>(frame) - 1) * n_ + (node - 1)] = v ? 1 : 0;
}

namespace {

void require_shape(const ExactInstance& inst, const ExactAssignment& a) {
  if (a.n() != inst.n || a.s() != inst.s || a.f_max() != inst.f_max) {
    throw std::invalid_argument("assignment shape does not match instance");
  }
}

// Per-node slot counts per frame, counts[frame-1][node-1].
std::vector<std::vector<int>> counts_of(const ExactInstance& inst,
                                        const ExactAssignment& a) {
  std::vector<std::vector<int>> counts(inst.f_max,
                                       std::vector<int>(inst.n, 0));
  for (int f = 1; f <= inst.f_max; ++f) {
    for (int j = 1; j <= inst.s; ++j) {
      for (int i = 1; i <= inst.n; ++i) {
        if (a.x(i, j, f)) ++counts[f - 1][i - 1];
      }
    }
  }
  return counts;
}

std::vector<double> alpha_of(const ExactInstance& inst,
                             const std::vector<std::vector<int>>& counts) {
  std::vector<double> alpha(inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    for (int f = 0; f < inst.f_max; ++f) {
      alpha[i] += counts[f][i] * inst.nodes[i].prr[f];
    }
  }
  return alpha;
}

// First frame (1-based) in which cumulative delivery reaches the
// payload, or 0 if it never does.
int completion_frame(const ExactInstance& inst,
                     const std::vector<std::vector<int>>& counts, int i) {
  double cum = 0.0;
  for (int f = 0; f < inst.f_max; ++f) {
    cum += counts[f][i - 1] * inst.nodes[i - 1].prr[f];
    if (cum >= inst.nodes[i - 1].payload - kCountEps) return f + 1;
  }
  return 0;
}

}  // namespace

double evaluate_objective(const ExactInstance& inst,
                          const ExactAssignment& a) {
  require_shape(inst, a);
  const std::vector<double> alpha = alpha_of(inst, counts_of(inst, a));
  double obj = 0.0;
  for (double v : alpha) obj += v;
  return obj;
}

void derive_phi(const ExactInstance& inst, ExactAssignment& a) {
  require_shape(inst, a);
  const auto counts = counts_of(inst, a);
  for (int i = 1; i <= inst.n; ++i) {
    const int comp = completion_frame(inst, counts, i);
    for (int f = 1; f <= inst.f_max; ++f) {
      a.set_phi(i, f, comp == 0 || f <= comp);
    }
  }
}

std::vector<ConstraintSlack> check_feasible(const ExactInstance& inst,
                                            const ExactAssignment& a) {
  inst.validate();
  require_shape(inst, a);
  const double e_a = rcap_cost(inst.constants);
  const auto counts = counts_of(inst, a);
  const auto alpha = alpha_of(inst, counts);

  std::vector<ConstraintSlack> out;
  auto add = [&](const char* name, double slack) {
    out.push_back({name, slack});
  };

  // cons1: residual energy at the horizon stays above E_td; harvest
  // counts in every frame, RCAP costs follow the phi flags as given.
  double s1 = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= inst.n; ++i) {
    const ExactNodeSpec& node = inst.nodes[i - 1];
    double tx_j = 0.0, rcap_j = 0.0, harvest_j = 0.0;
    for (int f = 1; f <= inst.f_max; ++f) {
      tx_j += counts[f - 1][i - 1] * inst.constants.e_tx;
      if (a.phi(i, f)) rcap_j += e_a;
      harvest_j += node.harvest[f - 1];
    }
    const double residual = node.energy_initial + harvest_j - rcap_j - tx_j;
    s1 = std::min(s1, residual - inst.constants.e_td);
  }
  add("cons1", s1);

  double s2 = std::numeric_limits<double>::infinity();
  double s3 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < inst.n; ++i) {
    s2 = std::min(s2, alpha[i] - inst.kappa * inst.nodes[i].payload);
    s3 = std::min(s3, inst.nodes[i].payload - alpha[i]);
  }
  add("cons2", s2);
  add("cons3", s3);

  // cons4 is structural for a boolean tensor.
  add("cons4", 0.0);

  double s5 = std::numeric_limits<double>::infinity();
  for (int f = 1; f <= inst.f_max; ++f) {
    for (int j = 1; j <= inst.s; ++j) {
      int users = 0;
      for (int i = 1; i <= inst.n; ++i) users += a.x(i, j, f) ? 1 : 0;
      s5 = std::min(s5, 1.0 - users);
    }
  }
  add("cons5", s5);

  // cons6-8 via the remaining-payload reading of v: v = max(0, lambda -
  // cumulative). cons6 then flags prefix overshoot; cons7/cons8 check v
  // is non-increasing along slots and frames.
  double s6 = std::numeric_limits<double>::infinity();
  double s7 = std::numeric_limits<double>::infinity();
  double s8 = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= inst.n; ++i) {
    const ExactNodeSpec& node = inst.nodes[i - 1];
    double cum = 0.0;
    double prev_v = node.payload;
    double last_frame_end_v = node.payload;
    for (int f = 1; f <= inst.f_max; ++f) {
      for (int j = 1; j <= inst.s; ++j) {
        if (a.x(i, j, f)) cum += node.prr[f - 1];
        const double v = std::max(0.0, node.payload - cum);
        s6 = std::min(s6, node.payload - cum - v);
        s7 = std::min(s7, prev_v - v);
        prev_v = v;
      }
      s8 = std::min(s8, last_frame_end_v - prev_v);
      last_frame_end_v = prev_v;
    }
  }
  add("cons6", s6);
  add("cons7", s7);
  add("cons8", s8);

  // cons9: no RCAP participation strictly after payload completion.
  double s9 = 0.0;
  for (int i = 1; i <= inst.n; ++i) {
    const int comp = completion_frame(inst, counts, i);
    if (comp == 0) continue;
    for (int f = comp + 1; f <= inst.f_max; ++f) {
      if (a.phi(i, f)) s9 = std::min(s9, -1.0);
    }
  }
  add("cons9", s9);

  double s10 = std::numeric_limits<double>::infinity();
  for (int f = 1; f <= inst.f_max; ++f) {
    for (int j = 1; j <= inst.s; ++j) {
      for (int i = 1; i <= inst.n; ++i) {
        const double phi = a.phi(i, f) ? 1.0 : 0.0;
        const double x = a.x(i, j, f) ? 1.0 : 0.0;
        s10 = std::min(s10, phi - x);
      }
    }
  }
  add("cons10", s10);

  return out;
}

bool all_satisfied(const std::vector<ConstraintSlack>& slacks, double tol) {
  for (const ConstraintSlack& s : slacks) {
    if (s.slack < -tol) return false;
  }
  return true;
}

namespace {

// Branch-and-bound state. Slots within a frame are exchangeable for the
// objective and every constraint checked here, so the search runs over
// per-frame slot counts and a canonical slot order is materialized at
// the end.
struct Search {
  const ExactInstance& inst;
  double e_a;
  std::vector<std::vector<int>> node_order;   // per frame, by q desc
  std::vector<double> suffix_bound;           // frames f..F, s * max q per frame
  std::vector<std::vector<double>> potential; // per node, sum_{g>=f} s*q
  std::vector<double> harvest_total;          // per node, all frames
  std::vector<double> alpha;
  std::vector<long> tx;
  std::vector<std::vector<int>> counts;
  double cur_obj = 0.0;

  bool found = false;
  double best_obj = -1.0;
  std::vector<std::vector<int>> best_counts;

  explicit Search(const ExactInstance& in)
      : inst(in),
        e_a(rcap_cost(in.constants)),
        alpha(in.n, 0.0),
        tx(in.n, 0),
        counts(in.f_max, std::vector<int>(in.n, 0)) {
    node_order.resize(inst.f_max);
    suffix_bound.assign(inst.f_max + 2, 0.0);
    for (int f = inst.f_max; f >= 1; --f) {
      auto& order = node_order[f - 1];
      order.resize(inst.n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double qa = inst.nodes[a].prr[f - 1];
        const double qb = inst.nodes[b].prr[f - 1];
        if (qa != qb) return qa > qb;
        return a < b;
      });
      double maxq = 0.0;
      for (int i = 0; i < inst.n; ++i) {
        maxq = std::max(maxq, inst.nodes[i].prr[f - 1]);
      }
      suffix_bound[f] = suffix_bound[f + 1] + inst.s * maxq;
    }
    potential.assign(inst.n, std::vector<double>(inst.f_max + 2, 0.0));
    harvest_total.assign(inst.n, 0.0);
    for (int i = 0; i < inst.n; ++i) {
      for (int f = inst.f_max; f >= 1; --f) {
        potential[i][f] = potential[i][f + 1] + inst.s * inst.nodes[i].prr[f - 1];
      }
      for (double h : inst.nodes[i].harvest) harvest_total[i] += h;
    }
  }

  // Canonical objective: nodes ascending, frames ascending. Matches
  // evaluate_objective so external comparisons are float-consistent.
  double canonical_objective() const {
    double obj = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      double a = 0.0;
      for (int f = 0; f < inst.f_max; ++f) {
        a += counts[f][i] * inst.nodes[i].prr[f];
      }
      obj += a;
    }
    return obj;
  }

  bool leaf_feasible() const {
    for (int i = 0; i < inst.n; ++i) {
      if (alpha[i] < inst.kappa * inst.nodes[i].payload - kCountEps) {
        return false;
      }
    }
    for (int i = 0; i < inst.n; ++i) {
      double cum = 0.0;
      int comp = 0;
      for (int f = 0; f < inst.f_max; ++f) {
        cum += counts[f][i] * inst.nodes[i].prr[f];
        if (comp == 0 && cum >= inst.nodes[i].payload - kCountEps) {
          comp = f + 1;
        }
      }
      const int rcap_frames = comp == 0 ? inst.f_max : comp;
      const double residual = inst.nodes[i].energy_initial +
                              harvest_total[i] - rcap_frames * e_a -
                              tx[i] * inst.constants.e_tx;
      if (residual < inst.constants.e_td - 1e-12) return false;
    }
    return true;
  }

  void leaf() {
    if (!leaf_feasible()) return;
    const double obj = canonical_objective();
    if (!found || obj > best_obj) {
      found = true;
      best_obj = obj;
      best_counts = counts;
    }
  }

  void enter_frame(int frame) {
    if (frame > inst.f_max) {
      leaf();
      return;
    }
    // Bound: what is already booked plus every remaining slot at the
    // frame-best PRR. A 1e-9 margin keeps float rounding from ever
    // pruning the true optimum.
    if (found && cur_obj + suffix_bound[frame] < best_obj - 1e-9) return;
    // A node that cannot reach its fairness share even with every
    // remaining slot makes the whole branch infeasible.
    for (int i = 0; i < inst.n; ++i) {
      if (alpha[i] + potential[i][frame] <
          inst.kappa * inst.nodes[i].payload - kCountEps) {
        return;
      }
    }
    assign(frame, 0, inst.s);
  }

  void assign(int frame, int order_idx, int slots_left) {
    if (order_idx == inst.n) {
      enter_frame(frame + 1);
      return;
    }
    const int i = node_order[frame - 1][order_idx];
    const double q = inst.nodes[i].prr[frame - 1];
    int cmax = 0;
    if (q > kCountEps) {
      // Highest count that keeps alpha within the payload cap; a
      // transmission may never overshoot lambda.
      const double room = inst.nodes[i].payload + kCountEps - alpha[i];
      cmax = room <= 0.0 ? 0
                         : std::min<long>(slots_left,
                                          static_cast<long>(room / q));
      // Guard against energy that no schedule could repay.
      const double budget = inst.nodes[i].energy_initial + harvest_total[i] -
                            inst.constants.e_td - e_a;
      if (budget < 0.0) {
        cmax = 0;
      } else {
        const long affordable =
            static_cast<long>(budget / inst.constants.e_tx) - tx[i];
        cmax = std::min<long>(cmax, std::max<long>(0, affordable));
      }
    }
    for (int c = cmax; c >= 0; --c) {
      const double dq = c * q;
      counts[frame - 1][i] += c;
      alpha[i] += dq;
      tx[i] += c;
      cur_obj += dq;
      assign(frame, order_idx + 1, slots_left - c);
      cur_obj -= dq;
      tx[i] -= c;
      alpha[i] -= dq;
      counts[frame - 1][i] -= c;
    }
  }
};

}  // namespace

ExactSolution solve_exact(const ExactInstance& inst) {
  inst.validate();
  if (!inst.within_budget()) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "instance needs %d binary variables, search budget is %d",
                  inst.n * inst.s * inst.f_max, inst.search_budget);
    throw BudgetExceeded(msg);
  }

  Search search(inst);
  search.enter_frame(1);

  ExactSolution sol;
  sol.assignment = ExactAssignment(inst.n, inst.s, inst.f_max);
  if (!search.found) {
    sol.status = SolveStatus::Infeasible;
    sol.alpha.assign(inst.n, 0.0);
    return sol;
  }

  sol.status = SolveStatus::Optimal;
  // Materialize the canonical slot order: within each frame, node 1's
  // slots first, then node 2's, and so on.
  for (int f = 1; f <= inst.f_max; ++f) {
    int slot = 1;
    for (int i = 1; i <= inst.n; ++i) {
      for (int c = 0; c < search.best_counts[f - 1][i - 1]; ++c) {
        sol.assignment.set_x(i, slot++, f, true);
      }
    }
  }
  derive_phi(inst, sol.assignment);
  sol.objective = evaluate_objective(inst, sol.assignment);
  sol.alpha = alpha_of(inst, counts_of(inst, sol.assignment));
  sol.slacks = check_feasible(inst, sol.assignment);
  return sol;
}

double gap(double heuristic_value, double exact_value) {
  if (!(exact_value > 0.0)) {
    throw std::invalid_argument("gap: exact value must be positive");
  }
  return (exact_value - heuristic_value) / exact_value;
}

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::invalid_argument("instance text, line " + std::to_string(line) +
                              ": " + what);
}

std::vector<double> parse_values(const std::vector<std::string>& tokens,
                                 int f_max, int line) {
  std::vector<double> values;
  for (size_t k = 1; k < tokens.size(); ++k) {
    values.push_back(std::stod(tokens[k]));
  }
  if (values.size() == 1 && f_max > 1) {
    values.assign(f_max, values[0]);  // broadcast
  }
  if (static_cast<int>(values.size()) != f_max) {
    parse_fail(line, "expected " + std::to_string(f_max) + " values or one");
  }
  return values;
}

}  // namespace

ExactInstance parse_instance_text(const std::string& text) {
  ExactInstance inst;
  inst.kappa = 0.5;
  bool saw_n = false, saw_s = false, saw_f = false;
  int current = -1;  // node index being filled
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (tokens.empty()) continue;
    const std::string& key = tokens[0];
    try {
      if (key == "n") {
        inst.n = std::stoi(tokens.at(1));
        inst.nodes.assign(inst.n, ExactNodeSpec{});
        saw_n = true;
      } else if (key == "s") {
        inst.s = std::stoi(tokens.at(1));
        saw_s = true;
      } else if (key == "f_max") {
        inst.f_max = std::stoi(tokens.at(1));
        saw_f = true;
      } else if (key == "kappa") {
        inst.kappa = std::stod(tokens.at(1));
      } else if (key == "budget") {
        inst.search_budget = std::stoi(tokens.at(1));
      } else if (key == "e_tx_hello") {
        inst.constants.e_tx_hello = std::stod(tokens.at(1));
      } else if (key == "e_rx_hack") {
        inst.constants.e_rx_hack = std::stod(tokens.at(1));
      } else if (key == "e_rx_sack") {
        inst.constants.e_rx_sack = std::stod(tokens.at(1));
      } else if (key == "e_tx") {
        inst.constants.e_tx = std::stod(tokens.at(1));
      } else if (key == "e_td") {
        inst.constants.e_td = std::stod(tokens.at(1));
      } else if (key == "v_cc") {
        inst.constants.v_cc = std::stod(tokens.at(1));
      } else if (key == "i_tx") {
        inst.constants.i_tx = std::stod(tokens.at(1));
      } else if (key == "i_rx") {
        inst.constants.i_rx = std::stod(tokens.at(1));
      } else if (key == "r_b") {
        inst.constants.r_b = std::stod(tokens.at(1));
      } else if (key == "node") {
        if (!saw_n) parse_fail(line, "node before n");
        current = std::stoi(tokens.at(1)) - 1;
        if (current < 0 || current >= inst.n) {
          parse_fail(line, "node id out of range");
        }
      } else if (key == "lambda" || key == "e0" || key == "q" ||
                 key == "harvest") {
        if (current < 0) parse_fail(line, key + " outside a node block");
        if (!saw_f) parse_fail(line, key + " before f_max");
        ExactNodeSpec& node = inst.nodes[current];
        if (key == "lambda") {
          node.payload = std::stoi(tokens.at(1));
        } else if (key == "e0") {
          node.energy_initial = std::stod(tokens.at(1));
        } else if (key == "q") {
          node.prr = parse_values(tokens, inst.f_max, line);
        } else {
          node.harvest = parse_values(tokens, inst.f_max, line);
        }
      } else {
        parse_fail(line, "unknown key '" + key + "'");
      }
    } catch (const std::out_of_range&) {
      parse_fail(line, "missing value for '" + key + "'");
    } catch (const std::invalid_argument& e) {
      if (std::string(e.what()).rfind("instance text", 0) == 0) throw;
      parse_fail(line, "malformed number after '" + key + "'");
    }
  }
  if (!saw_n || !saw_s || !saw_f) {
    throw std::invalid_argument("instance text: n, s and f_max are required");
  }
  for (ExactNodeSpec& node : inst.nodes) {
    if (node.harvest.empty()) node.harvest.assign(inst.f_max, 0.0);
  }
  inst.validate();
  return inst;
}

ExactInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open instance file: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_text(buf.str());
}

std::string format_instance_text(const ExactInstance& inst) {
  std::ostringstream out;
  char num[64];
  auto fmt = [&](double v) {
    std::snprintf(num, sizeof(num), "%.17g", v);
    return std::string(num);
  };
  out << "n " << inst.n << "\n"
      << "s " << inst.s << "\n"
      << "f_max " << inst.f_max << "\n"
      << "kappa " << fmt(inst.kappa) << "\n"
      << "budget " << inst.search_budget << "\n"
      << "e_tx_hello " << fmt(inst.constants.e_tx_hello) << "\n"
      << "e_rx_hack " << fmt(inst.constants.e_rx_hack) << "\n"
      << "e_rx_sack " << fmt(inst.constants.e_rx_sack) << "\n"
      << "e_tx " << fmt(inst.constants.e_tx) << "\n"
      << "e_td " << fmt(inst.constants.e_td) << "\n";
  for (int i = 1; i <= inst.n; ++i) {
    const ExactNodeSpec& node = inst.nodes[i - 1];
    out << "node " << i << "\n"
        << "lambda " << node.payload << "\n"
        << "e0 " << fmt(node.energy_initial) << "\n";
    out << "q";
    for (double q : node.prr) out << " " << fmt(q);
    out << "\nharvest";
    for (double h : node.harvest) out << " " << fmt(h);
    out << "\n";
  }
  return out.str();
}

}  // namespace ehfs
