#include "cli/figures.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "cli/csv.hpp"
#include "seqdisc/error.hpp"
#include "seqdisc/infotheory.hpp"
#include "seqdisc/optimizers.hpp"

namespace seqdisc::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::vector<double> kSweepOverlaps{0.1, 0.25, 0.4, 0.7};
const std::vector<double> kPriorFamily{0.5, 1.0 / 3.0, 0.25};

// Joint success vs q1b at equal priors.
void fig1(int res, std::ostream& out) {
  CsvWriter csv(out, {"s", "q1b", "p_ss"});
  for (double s : {0.1, 0.2, 0.25, 0.4}) {
    const auto p = make_problem(s, 0.5);
    for (double q : linspace(s, 1.0, res)) csv.row({s, q, symmetric_success(p, q)});
  }
}

// Optimal joint success vs s at equal priors, with the crossing row.
void fig2(int res, std::ostream& out) {
  CsvWriter csv(out, {"s", "p_ss_interior", "p_ss_boundary", "p_ss_opt"});
  std::vector<double> grid = figure_overlap_grid(res);
  grid.push_back(3.0 - 2.0 * std::sqrt(2.0));
  std::sort(grid.begin(), grid.end());
  for (double s : grid) {
    const auto p = make_problem(s, 0.5);
    const double root = std::sqrt(s);
    csv.row({s, (1.0 - root) * (1.0 - root), boundary_success(p), optimize_success_only(p).p_ss});
  }
}

// P_ss = eta1 (1 - q1b)^2 + eta2 (1 - q2b)^2 on the unit square; the
// constraint curves q1b q2b = s are analytic and left to the plotter.
void fig3(int res, std::ostream& out) {
  CsvWriter csv(out, {"eta1", "q1b", "q2b", "p_ss"});
  const int n = std::max(2, (res + 3) / 4);
  for (double eta1 : {0.5, 0.6}) {
    for (double a : linspace(0.0, 1.0, n)) {
      for (double b : linspace(0.0, 1.0, n)) {
        csv.row({eta1, a, b, eta1 * (1 - a) * (1 - a) + (1 - eta1) * (1 - b) * (1 - b)});
      }
    }
  }
}

void fig4(int res, std::ostream& out) {
  CsvWriter csv(out, {"eta1", "s_c"});
  for (double eta1 : linspace(0.01, 0.99, res)) csv.row({eta1, critical_overlap(eta1).value_or(kNaN)});
}

// Guessing and conclusive-only information vs q1 at equal priors, q2 = s^2/q1.
void fig5(int res, std::ostream& out) {
  CsvWriter csv(out, {"s", "q1", "i_guessing", "i_usd"});
  for (double s : kSweepOverlaps) {
    const auto p = make_problem(s, 0.5);
    for (double q : linspace(s * s, 1.0, res)) {
      csv.row({s, q, mi_guessing(p, q, std::min(1.0, s * s / q)), mi_usd_ab(p, q).mi});
    }
  }
}

void fig6(int res, std::ostream& out) {
  CsvWriter csv(out, {"eta1", "s", "i_usd_max", "q1_opt", "s_minus_q1_opt", "i_at_q1_eq_s"});
  for (double eta1 : kPriorFamily) {
    for (double s : figure_overlap_grid(res)) {
      const auto p = make_problem(s, eta1);
      const auto best = optimize_mi_usd_ab(p);
      csv.row({eta1, s, best.mi, best.optimizer_arg, s - best.optimizer_arg, mi_usd_ab(p, s).mi});
    }
  }
}

void fig7(int res, std::ostream& out) {
  CsvWriter csv(out, {"eta1", "s", "q1b", "i_bc"});
  for (double eta1 : {0.5, 1.0 / 3.0}) {
    for (double s : kSweepOverlaps) {
      const auto p = make_problem(s, eta1);
      for (double q : linspace(s, 1.0, res)) csv.row({eta1, s, q, mi_usd_bc_symmetric(p, q).mi});
    }
  }
}

void fig8(int res, std::ostream& out) {
  CsvWriter csv(out,
                {"eta1", "s", "i_bc_max", "q1b_opt", "sqrt_s_minus_q1b_opt", "i_at_q1b_eq_sqrt_s"});
  for (double eta1 : kPriorFamily) {
    for (double s : figure_overlap_grid(res)) {
      const auto p = make_problem(s, eta1);
      const auto best = optimize_mi_usd_bc(p);
      csv.row({eta1, s, best.mi, best.optimizer_arg, std::sqrt(s) - best.optimizer_arg,
               mi_usd_bc_symmetric(p, std::sqrt(s)).mi});
    }
  }
}

// Strategy comparison at equal priors.
void fig9(int res, std::ostream& out) {
  CsvWriter csv(out, {"s", "i_helstrom", "i_boundary_guessing", "i_usd_max", "i_ff_max"});
  for (double s : figure_overlap_grid(res)) {
    const auto p = make_problem(s, 0.5);
    csv.row({s, helstrom_mi(p), mi_guessing(p, 1.0, s * s), optimize_mi_usd_ab(p).mi,
             optimize_mi_ff_ab(p).mi});
  }
}

void figff(int res, std::ostream& out) {
  CsvWriter csv(out, {"eta1", "s", "i_ff_max", "c_opt"});
  for (double eta1 : kPriorFamily) {
    for (double s : figure_overlap_grid(res)) {
      const auto best = optimize_mi_ff_ab(make_problem(s, eta1));
      csv.row({eta1, s, best.mi, best.optimizer_arg});
    }
  }
}

using FigureFn = std::function<void(int, std::ostream&)>;

const std::map<std::string, FigureFn, std::less<>>& registry() {
  static const std::map<std::string, FigureFn, std::less<>> figs{
      {"fig1", fig1}, {"fig2", fig2}, {"fig3", fig3}, {"fig4", fig4}, {"fig5", fig5},
      {"fig6", fig6}, {"fig7", fig7}, {"fig8", fig8}, {"fig9", fig9}, {"figff", figff}};
  return figs;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

std::vector<double> figure_overlap_grid(int resolution) { return linspace(0.001, 0.999, resolution); }

void write_figure(std::string_view id, int resolution, std::ostream& out) {
  const auto it = registry().find(id);
  if (it == registry().end()) {
    throw Error(ErrorCode::UnknownFigure, "no figure named '" + std::string(id) + "'");
  }
  if (resolution < 2) throw Error(ErrorCode::OutOfRange, "resolution must be at least 2");
  it->second(resolution, out);
}

}  // namespace seqdisc::cli
