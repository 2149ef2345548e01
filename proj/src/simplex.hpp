#pragma once

#include <vector>

#include "owen/lp.hpp"

namespace owen::detail {

// Dense exact tableau, two-phase primal simplex with Bland's rule. After an
// optimal solve, further rows can be appended and the tableau reoptimized
// with the dual simplex.
class Simplex {
 public:
  explicit Simplex(const LinearProgram& lp);

  LpSolution run(const LinearProgram& lp);

  // Rows lp.constraint(first)..end are new since the last call. Requires the
  // previous result to be Optimal.
  LpSolution append_rows(const LinearProgram& lp, int first);

 private:
  enum class Kind { Structural, Slack, Artificial };

  struct RowRef {
    int column;  // identity column of the row
    int sign;    // transformed row = sign * original row
  };

  int add_column(Kind kind);
  void add_row(const Constraint& c, int sign, bool allow_artificial);
  void pivot(int row, int col);
  void price(const std::vector<Rational>& cost);
  bool primal_simplex(int& unbounded_col);
  bool dual_simplex();
  LpSolution extract(const LinearProgram& lp, LpStatus status,
                     int unbounded_col) const;

  int var_count_ = 0;
  std::vector<int> plus_, minus_;  // per LP variable, minus_ = -1 if not free
  std::vector<Kind> kind_;
  std::vector<Rational> cost_;  // phase-2 cost per column (minimization)
  std::vector<std::vector<Rational>> t_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  std::vector<Rational> d_;  // reduced costs
  Rational z_;
  std::vector<std::vector<RowRef>> rows_of_;  // per LP constraint
  bool phase_two_ = false;
};

}  // namespace owen::detail
