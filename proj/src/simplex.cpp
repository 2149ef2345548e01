#include "simplex.hpp"

namespace owen::detail {

Simplex::Simplex(const LinearProgram& lp) {
  var_count_ = lp.variable_count();
  bool max = lp.sense() == Sense::Maximize;
  std::vector<Rational> c(var_count_);
  for (const Term& t : lp.objective()) c[t.var] += t.coef;
  for (int j = 0; j < var_count_; ++j) {
    plus_.push_back(add_column(Kind::Structural));
    cost_[plus_[j]] = max ? -c[j] : c[j];
    if (lp.variable(j).free) {
      minus_.push_back(add_column(Kind::Structural));
      cost_[minus_[j]] = -cost_[plus_[j]];
    } else {
      minus_.push_back(-1);
    }
  }
  for (const Constraint& con : lp.constraints()) {
    rows_of_.emplace_back();
    add_row(con, con.rhs < 0 ? -1 : 1, true);
  }
}

int Simplex::add_column(Kind kind) {
  kind_.push_back(kind);
  cost_.push_back(0);
  d_.push_back(0);
  for (auto& row : t_) row.push_back(0);
  return static_cast<int>(kind_.size()) - 1;
}

// Appends the row sign * (a x [+/- s]) = sign * b. In the initial build a
// row without a usable +1 slack gets an artificial basic column; appended
// rows always carry a +1 slack and are expressed in the current basis.
void Simplex::add_row(const Constraint& con, int sign, bool initial) {
  int slack = -1;
  Rational slack_coef = 0;
  if (con.relation != Relation::Equal) {
    slack = add_column(Kind::Slack);
    slack_coef = con.relation == Relation::LessEqual ? 1 : -1;
  }
  int basic = -1;
  if (slack >= 0 && slack_coef * sign == 1) basic = slack;
  if (basic < 0) {
    // only reachable in the initial build
    basic = add_column(Kind::Artificial);
  }
  std::vector<Rational> row(kind_.size());
  for (const Term& t : con.terms) {
    row[plus_[t.var]] += t.coef * sign;
    if (minus_[t.var] >= 0) row[minus_[t.var]] -= t.coef * sign;
  }
  if (slack >= 0) row[slack] = slack_coef * sign;
  row[basic] = 1;
  Rational b = con.rhs * sign;
  if (!initial) {
    for (std::size_t r = 0; r < t_.size(); ++r) {
      Rational f = row[basis_[r]];
      if (f == 0) continue;
      const auto& src = t_[r];
      for (std::size_t j = 0; j < row.size(); ++j)
        if (src[j] != 0) row[j] -= f * src[j];
      b -= f * rhs_[r];
    }
  }
  t_.push_back(std::move(row));
  rhs_.push_back(b);
  basis_.push_back(basic);
  rows_of_.back().push_back({basic, sign});
}

void Simplex::pivot(int row, int col) {
  auto& pr = t_[row];
  Rational p = pr[col];
  std::vector<int> nz;
  for (std::size_t j = 0; j < pr.size(); ++j) {
    if (pr[j] == 0) continue;
    pr[j] /= p;
    nz.push_back(static_cast<int>(j));
  }
  rhs_[row] /= p;
  Rational f;
  for (std::size_t i = 0; i < t_.size(); ++i) {
    if (static_cast<int>(i) == row || t_[i][col] == 0) continue;
    f = t_[i][col];
    auto& ri = t_[i];
    for (int j : nz) ri[j] -= f * pr[j];
    rhs_[i] -= f * rhs_[row];
  }
  if (d_[col] != 0) {
    f = d_[col];
    for (int j : nz) d_[j] -= f * pr[j];
    z_ += f * rhs_[row];
  }
  basis_[row] = col;
}

void Simplex::price(const std::vector<Rational>& cost) {
  d_ = cost;
  z_ = 0;
  for (std::size_t r = 0; r < t_.size(); ++r) {
    const Rational& cb = cost[basis_[r]];
    if (cb == 0) continue;
    for (std::size_t j = 0; j < d_.size(); ++j)
      if (t_[r][j] != 0) d_[j] -= cb * t_[r][j];
    z_ += cb * rhs_[r];
  }
}

bool Simplex::primal_simplex(int& unbounded_col) {
  Rational best, ratio;
  while (true) {
    int q = -1;
    for (std::size_t j = 0; j < d_.size(); ++j) {
      if (phase_two_ && kind_[j] == Kind::Artificial) continue;
      if (d_[j] < 0) {
        q = static_cast<int>(j);
        break;
      }
    }
    if (q < 0) return true;
    int leave = -1;
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (t_[r][q] <= 0) continue;
      ratio = rhs_[r] / t_[r][q];
      if (leave < 0 || ratio < best ||
          (ratio == best && basis_[r] < basis_[leave])) {
        leave = static_cast<int>(r);
        best = ratio;
      }
    }
    if (leave < 0) {
      unbounded_col = q;
      return false;
    }
    pivot(leave, q);
  }
}

bool Simplex::dual_simplex() {
  Rational best, ratio;
  while (true) {
    int leave = -1;
    for (std::size_t r = 0; r < t_.size(); ++r)
      if (rhs_[r] < 0 && (leave < 0 || basis_[r] < basis_[leave]))
        leave = static_cast<int>(r);
    if (leave < 0) return true;
    const auto& row = t_[leave];
    int q = -1;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (kind_[j] == Kind::Artificial || row[j] >= 0) continue;
      ratio = d_[j] / -row[j];
      if (q < 0 || ratio < best) {
        q = static_cast<int>(j);
        best = ratio;
      }
    }
    if (q < 0) return false;
    pivot(leave, q);
  }
}

LpSolution Simplex::run(const LinearProgram& lp) {
  std::vector<Rational> phase_one(kind_.size());
  bool any_artificial = false;
  for (std::size_t j = 0; j < kind_.size(); ++j)
    if (kind_[j] == Kind::Artificial) {
      phase_one[j] = 1;
      any_artificial = true;
    }
  int unbounded = -1;
  if (any_artificial) {
    price(phase_one);
    primal_simplex(unbounded);
    if (z_ > 0) return extract(lp, LpStatus::Infeasible, -1);
    for (std::size_t r = 0; r < t_.size(); ++r) {
      if (kind_[basis_[r]] != Kind::Artificial) continue;
      for (std::size_t j = 0; j < kind_.size(); ++j) {
        if (kind_[j] != Kind::Artificial && t_[r][j] != 0) {
          pivot(static_cast<int>(r), static_cast<int>(j));
          break;
        }
      }
    }
  }
  phase_two_ = true;
  price(cost_);
  if (!primal_simplex(unbounded))
    return extract(lp, LpStatus::Unbounded, unbounded);
  return extract(lp, LpStatus::Optimal, -1);
}

LpSolution Simplex::append_rows(const LinearProgram& lp, int first) {
  for (int i = first; i < lp.constraint_count(); ++i) {
    const Constraint& con = lp.constraint(i);
    rows_of_.emplace_back();
    if (con.relation != Relation::GreaterEqual)
      add_row({con.terms, Relation::LessEqual, con.rhs, {}}, 1, false);
    if (con.relation != Relation::LessEqual)
      add_row({con.terms, Relation::GreaterEqual, con.rhs, {}}, -1, false);
  }
  if (!dual_simplex()) return extract(lp, LpStatus::Infeasible, -1);
  return extract(lp, LpStatus::Optimal, -1);
}

LpSolution Simplex::extract(const LinearProgram& lp, LpStatus status,
                            int unbounded_col) const {
  LpSolution s;
  s.status = status;
  if (status == LpStatus::Infeasible) return s;
  std::vector<Rational> value(kind_.size());
  if (status == LpStatus::Unbounded) {
    value[unbounded_col] = 1;
    for (std::size_t r = 0; r < t_.size(); ++r)
      value[basis_[r]] = -t_[r][unbounded_col];
  } else {
    for (std::size_t r = 0; r < t_.size(); ++r) value[basis_[r]] = rhs_[r];
  }
  std::vector<Rational> x(var_count_);
  for (int j = 0; j < var_count_; ++j) {
    x[j] = value[plus_[j]];
    if (minus_[j] >= 0) x[j] -= value[minus_[j]];
  }
  if (status == LpStatus::Unbounded) {
    s.ray = std::move(x);
    return s;
  }
  s.primal = std::move(x);
  bool max = lp.sense() == Sense::Maximize;
  s.dual.resize(rows_of_.size());
  for (std::size_t i = 0; i < rows_of_.size(); ++i) {
    Rational y = 0;
    for (const RowRef& ref : rows_of_[i]) y -= d_[ref.column] * ref.sign;
    s.dual[i] = max ? -y : y;
  }
  s.objective = evaluate(lp.objective(), s.primal);
  return s;
}

}  // namespace owen::detail
