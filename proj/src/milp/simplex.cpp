#include <algorithm>
#include <cmath>

#include "tornado/milp.hpp"

namespace tornado::milp {

namespace {

// Dense tableau form of  min c x  s.t.  A x + s = b,  l <= (x, s) <= u.
// Rows whose slack cannot absorb the initial residual get an artificial
// column; phase one drives the artificials to zero.
class Tableau {
 public:
  Tableau(const Model& model, std::span<const double> lower, std::span<const double> upper, const LpOptions& opt)
      : opt_(opt), n_(model.num_vars()), m_(model.num_rows()) {
    const auto& vars = model.variables();
    lo_.resize(n_ + m_);
    up_.resize(n_ + m_);
    for (std::size_t j = 0; j < n_; ++j) {
      lo_[j] = lower.empty() ? vars[j].lower : lower[j];
      up_[j] = upper.empty() ? vars[j].upper : upper[j];
      if (lo_[j] > up_[j]) bounds_conflict_ = true;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      switch (model.constraints()[i].sense) {
        case RowSense::le: lo_[n_ + i] = 0.0; up_[n_ + i] = kInf; break;
        case RowSense::ge: lo_[n_ + i] = -kInf; up_[n_ + i] = 0.0; break;
        case RowSense::eq: lo_[n_ + i] = 0.0; up_[n_ + i] = 0.0; break;
      }
    }

    x_.assign(n_ + m_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
      if (std::isfinite(lo_[j])) x_[j] = lo_[j];
      else if (std::isfinite(up_[j])) x_[j] = up_[j];
    }

    // Count artificials first so the column layout is fixed.
    std::vector<double> residual(m_);
    std::vector<double> dense(m_ * n_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = model.constraints()[i];
      double r = row.rhs;
      for (const auto& t : row.terms) {
        dense[i * n_ + t.var] += t.coef;
        r -= t.coef * x_[t.var];
      }
      residual[i] = r;
    }
    std::vector<std::size_t> art_row;
    for (std::size_t i = 0; i < m_; ++i) {
      if (residual[i] < lo_[n_ + i] || residual[i] > up_[n_ + i]) art_row.push_back(i);
    }
    cols_ = n_ + m_ + art_row.size();
    lo_.resize(cols_, 0.0);
    up_.resize(cols_, kInf);
    x_.resize(cols_, 0.0);
    is_art_.assign(cols_, false);
    basic_.assign(cols_, false);
    basis_.assign(m_, 0);
    t_.assign(m_ * cols_, 0.0);

    std::size_t next_art = n_ + m_;
    std::size_t k = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      double* row = &t_[i * cols_];
      std::copy(&dense[i * n_], &dense[i * n_] + n_, row);
      row[n_ + i] = 1.0;
      const std::size_t s = n_ + i;
      if (k < art_row.size() && art_row[k] == i) {
        ++k;
        const double bound = std::clamp(residual[i], lo_[s], up_[s]);
        x_[s] = bound;
        const double q = residual[i] - bound;
        const double sigma = q > 0.0 ? 1.0 : -1.0;
        const std::size_t a = next_art++;
        row[a] = sigma;
        is_art_[a] = true;
        for (std::size_t j = 0; j < cols_; ++j) row[j] *= sigma;
        basis_[i] = a;
        basic_[a] = true;
        x_[a] = std::abs(q);
        art_scale_.push_back(1.0 + std::abs(model.constraints()[i].rhs));
      } else {
        basis_[i] = s;
        basic_[s] = true;
        x_[s] = residual[i];
      }
    }
  }

  LpResult solve(const Model& model) {
    LpResult res;
    if (bounds_conflict_) {
      res.status = Status::infeasible;
      return res;
    }
    if (cols_ > n_ + m_) {
      std::vector<double> phase1(cols_, 0.0);
      for (std::size_t j = 0; j < cols_; ++j) {
        if (is_art_[j]) phase1[j] = 1.0;
      }
      const Status st = iterate(phase1);
      res.iterations = iterations_;
      if (st == Status::iteration_limit) {
        res.status = st;
        return res;
      }
      // Each artificial is judged against the scale of its own row.
      for (std::size_t j = n_ + m_; j < cols_; ++j) {
        if (x_[j] > 1e-7 * art_scale_[j - n_ - m_]) {
          res.status = Status::infeasible;
          return res;
        }
      }
      drive_out_artificials();
    }

    std::vector<double> cost(cols_, 0.0);
    const double sign = model.sense() == ObjSense::maximize ? -1.0 : 1.0;
    for (const auto& t : model.objective()) cost[t.var] += sign * t.coef;
    const Status st = iterate(cost);
    res.iterations = iterations_;
    res.status = st;
    if (st != Status::optimal) return res;
    res.x.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    res.objective = model.evaluate(res.x);
    return res;
  }

 private:
  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }

  void pivot(std::size_t r, std::size_t j) {
    double* prow = &t_[r * cols_];
    const double inv = 1.0 / prow[j];
    for (std::size_t k = 0; k < cols_; ++k) prow[k] *= inv;
    prow[j] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * cols_];
      const double f = row[j];
      if (f == 0.0) continue;
      for (std::size_t k = 0; k < cols_; ++k) row[k] -= f * prow[k];
      row[j] = 0.0;
    }
    basic_[basis_[r]] = false;
    basis_[r] = j;
    basic_[j] = true;
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < m_; ++r) {
      if (!is_art_[basis_[r]]) continue;
      std::size_t best = cols_;
      double mag = opt_.pivot_tolerance;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (basic_[j]) continue;
        const double v = std::abs(at(r, j));
        if (v > mag) {
          mag = v;
          best = j;
        }
      }
      const std::size_t a = basis_[r];
      if (best < cols_) {
        pivot(r, best);
        x_[a] = 0.0;
      }
    }
    for (std::size_t j = 0; j < cols_; ++j) {
      if (is_art_[j]) {
        lo_[j] = 0.0;
        up_[j] = 0.0;
        if (!basic_[j]) x_[j] = 0.0;
      }
    }
  }

  Status iterate(const std::vector<double>& cost) {
    std::size_t degenerate = 0;
    std::vector<double> d(cols_);
    while (true) {
      if (iterations_ >= opt_.max_iterations) return Status::iteration_limit;
      const bool bland = degenerate >= opt_.degenerate_limit;

      for (std::size_t j = 0; j < cols_; ++j) d[j] = basic_[j] ? 0.0 : cost[j];
      for (std::size_t i = 0; i < m_; ++i) {
        const double cb = cost[basis_[i]];
        if (cb == 0.0) continue;
        const double* row = &t_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) {
          if (!basic_[j]) d[j] -= cb * row[j];
        }
      }

      std::size_t enter = cols_;
      int dir = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (basic_[j] || lo_[j] == up_[j]) continue;
        int jd = 0;
        if (d[j] < -opt_.optimality_tolerance && x_[j] < up_[j]) jd = 1;
        else if (d[j] > opt_.optimality_tolerance && x_[j] > lo_[j]) jd = -1;
        if (jd == 0) continue;
        if (bland) {
          enter = j;
          dir = jd;
          break;
        }
        if (std::abs(d[j]) > best) {
          best = std::abs(d[j]);
          enter = j;
          dir = jd;
        }
      }
      if (enter == cols_) return Status::optimal;

      double theta = up_[enter] - lo_[enter];
      std::size_t leave_row = m_;
      double leave_mag = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (std::abs(a) <= opt_.pivot_tolerance) continue;
        const std::size_t k = basis_[i];
        const double rate = -dir * a;
        double limit = kInf;
        if (rate < 0.0 && std::isfinite(lo_[k])) limit = std::max(0.0, (x_[k] - lo_[k]) / -rate);
        else if (rate > 0.0 && std::isfinite(up_[k])) limit = std::max(0.0, (up_[k] - x_[k]) / rate);
        if (!std::isfinite(limit)) continue;
        bool take = false;
        if (limit < theta - 1e-12) {
          take = true;
        } else if (limit <= theta + 1e-12 && leave_row < m_) {
          take = bland ? k < basis_[leave_row] : std::abs(a) > leave_mag;
        } else if (limit <= theta && leave_row == m_) {
          take = true;
        }
        if (take) {
          theta = std::min(theta, limit);
          leave_row = i;
          leave_mag = std::abs(a);
        }
      }
      if (!std::isfinite(theta)) return Status::unbounded;
      ++iterations_;
      degenerate = theta < 1e-12 ? degenerate + 1 : 0;

      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a != 0.0) x_[basis_[i]] -= dir * a * theta;
      }
      if (leave_row == m_) {
        x_[enter] = dir > 0 ? up_[enter] : lo_[enter];
        continue;
      }
      x_[enter] += dir * theta;
      const std::size_t k = basis_[leave_row];
      const double rate = -dir * at(leave_row, enter);
      x_[k] = rate < 0.0 ? lo_[k] : up_[k];
      pivot(leave_row, enter);
    }
  }

  const LpOptions& opt_;
  std::size_t n_;
  std::size_t m_;
  std::size_t cols_ = 0;
  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<double> x_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<bool> basic_;
  std::vector<bool> is_art_;
  std::vector<double> art_scale_;  // 1 + |rhs| per artificial
  bool bounds_conflict_ = false;
  std::size_t iterations_ = 0;
};

}  // namespace

LpResult solve_lp(const Model& model, std::span<const double> lower, std::span<const double> upper,
                  const LpOptions& options) {
  Tableau tab(model, lower, upper, options);
  return tab.solve(model);
}

}  // namespace tornado::milp
