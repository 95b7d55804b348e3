#include "fbc/exactla.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>
#include <tuple>

#include "fbc/errors.hpp"

namespace fbc {

  ////////////////////////////////////////////////////////////////////////
  // IntMatrix
  ////////////////////////////////////////////////////////////////////////

  IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
      : _cols(cols), _rows(rows) {}

  IntMatrix::IntMatrix(
      std::initializer_list<std::initializer_list<long>> dense) {
    _cols = dense.size() == 0 ? 0 : dense.begin()->size();
    for (auto const& r : dense) {
      if (r.size() != _cols) {
        throw InputError("ragged matrix literal");
      }
      row_type row;
      std::size_t j = 0;
      for (long v : r) {
        if (v != 0) {
          row.push_back({j, Integer(v)});
        }
        ++j;
      }
      _rows.push_back(std::move(row));
    }
  }

  IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m._rows[i].push_back({i, Integer(1)});
    }
    return m;
  }

  std::size_t IntMatrix::nonzeros() const noexcept {
    std::size_t n = 0;
    for (auto const& r : _rows) {
      n += r.size();
    }
    return n;
  }

  namespace {
    int cmpabs(Integer const& a, Integer const& b) {
      return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
    }
    int cmpabs(Integer const& a, unsigned long b) {
      return mpz_cmpabs_ui(a.get_mpz_t(), b);
    }

    auto find_col(IntMatrix::row_type const& r, std::size_t j) {
      return std::lower_bound(
          r.begin(), r.end(), j, [](IntMatrix::Entry const& e, std::size_t c) {
            return e.col < c;
          });
    }
    auto find_col(IntMatrix::row_type& r, std::size_t j) {
      return std::lower_bound(
          r.begin(), r.end(), j, [](IntMatrix::Entry const& e, std::size_t c) {
            return e.col < c;
          });
    }
  }  // namespace

  Integer IntMatrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows() || j >= _cols) {
      throw InputError("matrix index out of range");
    }
    auto const& r  = _rows[i];
    auto        it = find_col(r, j);
    if (it != r.end() && it->col == j) {
      return it->value;
    }
    return Integer(0);
  }

  void IntMatrix::set(std::size_t i, std::size_t j, Integer const& v) {
    if (i >= rows() || j >= _cols) {
      throw InputError("matrix index out of range");
    }
    auto& r  = _rows[i];
    auto  it = find_col(r, j);
    if (it != r.end() && it->col == j) {
      if (v == 0) {
        r.erase(it);
      } else {
        it->value = v;
      }
    } else if (v != 0) {
      r.insert(it, Entry{j, v});
    }
  }

  void IntMatrix::add_to(std::size_t i, std::size_t j, Integer const& v) {
    if (v == 0) {
      return;
    }
    if (i >= rows() || j >= _cols) {
      throw InputError("matrix index out of range");
    }
    auto& r  = _rows[i];
    auto  it = find_col(r, j);
    if (it != r.end() && it->col == j) {
      it->value += v;
      if (it->value == 0) {
        r.erase(it);
      }
    } else {
      r.insert(it, Entry{j, v});
    }
  }

  void IntMatrix::set_row(std::size_t i, row_type r) {
    _rows.at(i) = std::move(r);
  }

  void IntMatrix::append_row(row_type r) {
    _rows.push_back(std::move(r));
  }

  bool IntMatrix::is_zero() const noexcept {
    return std::all_of(
        _rows.begin(), _rows.end(), [](auto const& r) { return r.empty(); });
  }

  IntMatrix IntMatrix::transpose() const {
    IntMatrix t(_cols, rows());
    for (std::size_t i = 0; i < rows(); ++i) {
      for (auto const& e : _rows[i]) {
        t._rows[e.col].push_back({i, e.value});
      }
    }
    return t;
  }

  bool operator==(IntMatrix const& a, IntMatrix const& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      return false;
    }
    for (std::size_t i = 0; i < a.rows(); ++i) {
      auto const& x = a.row(i);
      auto const& y = b.row(i);
      if (x.size() != y.size()) {
        return false;
      }
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].col != y[k].col || x[k].value != y[k].value) {
          return false;
        }
      }
    }
    return true;
  }

  IntMatrix operator*(IntMatrix const& a, IntMatrix const& b) {
    if (a.cols() != b.rows()) {
      throw InputError("matrix product dimension mismatch");
    }
    IntMatrix            c(a.rows(), b.cols());
    std::vector<Integer> acc(b.cols());
    std::vector<char>    touched(b.cols(), 0);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      cols.clear();
      for (auto const& e : a.row(i)) {
        for (auto const& f : b.row(e.col)) {
          if (!touched[f.col]) {
            touched[f.col] = 1;
            cols.push_back(f.col);
          }
          acc[f.col] += e.value * f.value;
        }
      }
      std::sort(cols.begin(), cols.end());
      IntMatrix::row_type r;
      for (auto j : cols) {
        if (acc[j] != 0) {
          r.push_back({j, acc[j]});
        }
        acc[j]     = 0;
        touched[j] = 0;
      }
      c.set_row(i, std::move(r));
    }
    return c;
  }

  IntMatrix operator-(IntMatrix const& a, IntMatrix const& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
      throw InputError("matrix difference dimension mismatch");
    }
    IntMatrix c = a;
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (auto const& e : b.row(i)) {
        c.add_to(i, e.col, -e.value);
      }
    }
    return c;
  }

  IntMatrix matrix_power(IntMatrix const& a, std::size_t n) {
    if (!a.is_square()) {
      throw InputError("matrix_power needs a square matrix");
    }
    IntMatrix result = IntMatrix::identity(a.rows());
    IntMatrix base   = a;
    while (n > 0) {
      if (n & 1U) {
        result = result * base;
      }
      n >>= 1U;
      if (n > 0) {
        base = base * base;
      }
    }
    return result;
  }

  IntMatrix diagonal_matrix(std::size_t                 rows,
                            std::size_t                 cols,
                            std::vector<Integer> const& divisors) {
    if (divisors.size() > std::min(rows, cols)) {
      throw InputError("too many divisors for the requested shape");
    }
    IntMatrix d(rows, cols);
    for (std::size_t i = 0; i < divisors.size(); ++i) {
      d.set(i, i, divisors[i]);
    }
    return d;
  }

  ////////////////////////////////////////////////////////////////////////
  // Dense Smith form with minimal-norm pivots
  ////////////////////////////////////////////////////////////////////////

  namespace {

    using Dense = std::vector<std::vector<Integer>>;

    Dense identity_dense(std::size_t n) {
      Dense d(n, std::vector<Integer>(n));
      for (std::size_t i = 0; i < n; ++i) {
        d[i][i] = 1;
      }
      return d;
    }

    class DenseSmith {
     public:
      DenseSmith(Dense a, bool track) : _a(std::move(a)), _track(track) {
        _rows = _a.size();
        _cols = _rows == 0 ? 0 : _a[0].size();
        if (_track) {
          _u = identity_dense(_rows);
          _v = identity_dense(_cols);
        }
      }

      std::vector<Integer> run() {
        std::vector<Integer> divisors;
        std::size_t const    n = std::min(_rows, _cols);
        for (std::size_t k = 0; k < n; ++k) {
          if (!select_pivot(k, k, _rows, k, _cols)) {
            break;
          }
          reduce_at(k);
          if (_a[k][k] < 0) {
            negate_row(k);
          }
          divisors.push_back(_a[k][k]);
        }
        return divisors;
      }

      Dense const& left() const {
        return _u;
      }
      Dense const& right() const {
        return _v;
      }

     private:
      // Moves the nonzero entry of least absolute value in the block
      // [r0, r1) x [c0, c1) to (k, k). Ties keep the first in row-major
      // order.
      bool select_pivot(std::size_t k,
                        std::size_t r0,
                        std::size_t r1,
                        std::size_t c0,
                        std::size_t c1) {
        std::size_t bi = r1, bj = c1;
        for (std::size_t i = r0; i < r1; ++i) {
          for (std::size_t j = c0; j < c1; ++j) {
            auto const& x = _a[i][j];
            if (x != 0
                && (bi == r1 || cmpabs(x, _a[bi][bj]) < 0)) {
              bi = i;
              bj = j;
              if (cmpabs(x, 1) == 0) {
                goto found;
              }
            }
          }
        }
        if (bi == r1) {
          return false;
        }
      found:
        swap_rows(k, bi);
        swap_cols(k, bj);
        return true;
      }

      void reduce_at(std::size_t k) {
        Integer q;
        while (true) {
          for (std::size_t i = k + 1; i < _rows; ++i) {
            if (_a[i][k] != 0) {
              mpz_tdiv_q(q.get_mpz_t(), _a[i][k].get_mpz_t(),
                         _a[k][k].get_mpz_t());
              if (q != 0) {
                row_axpy(i, k, -q);
              }
            }
          }
          for (std::size_t j = k + 1; j < _cols; ++j) {
            if (_a[k][j] != 0) {
              mpz_tdiv_q(q.get_mpz_t(), _a[k][j].get_mpz_t(),
                         _a[k][k].get_mpz_t());
              if (q != 0) {
                col_axpy(j, k, -q);
              }
            }
          }
          // Remainders left in the pivot row or column are strictly
          // smaller than the pivot; promote the least of them.
          std::size_t bi = 0, bj = 0;
          bool        have = false;
          for (std::size_t i = k + 1; i < _rows; ++i) {
            if (_a[i][k] != 0
                && (!have || cmpabs(_a[i][k], _a[bi][bj]) < 0)) {
              bi = i, bj = k, have = true;
            }
          }
          for (std::size_t j = k + 1; j < _cols; ++j) {
            if (_a[k][j] != 0
                && (!have || cmpabs(_a[k][j], _a[bi][bj]) < 0)) {
              bi = k, bj = j, have = true;
            }
          }
          if (have) {
            swap_rows(k, bi);
            swap_cols(k, bj);
            continue;
          }
          // Pivot must divide the whole trailing block.
          bool fixed = false;
          for (std::size_t i = k + 1; i < _rows && !fixed; ++i) {
            for (std::size_t j = k + 1; j < _cols; ++j) {
              if (_a[i][j] != 0 && !mpz_divisible_p(_a[i][j].get_mpz_t(),
                                                    _a[k][k].get_mpz_t())) {
                row_axpy(k, i, Integer(1));
                fixed = true;
                break;
              }
            }
          }
          if (!fixed) {
            return;
          }
        }
      }

      // row_dst += f * row_src
      void row_axpy(std::size_t dst, std::size_t src, Integer const& f) {
        for (std::size_t j = 0; j < _cols; ++j) {
          if (_a[src][j] != 0) {
            _a[dst][j] += f * _a[src][j];
          }
        }
        if (_track) {
          for (std::size_t j = 0; j < _rows; ++j) {
            if (_u[src][j] != 0) {
              _u[dst][j] += f * _u[src][j];
            }
          }
        }
      }

      // col_dst += f * col_src
      void col_axpy(std::size_t dst, std::size_t src, Integer const& f) {
        for (std::size_t i = 0; i < _rows; ++i) {
          if (_a[i][src] != 0) {
            _a[i][dst] += f * _a[i][src];
          }
        }
        if (_track) {
          for (std::size_t i = 0; i < _cols; ++i) {
            if (_v[i][src] != 0) {
              _v[i][dst] += f * _v[i][src];
            }
          }
        }
      }

      void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) {
          return;
        }
        std::swap(_a[a], _a[b]);
        if (_track) {
          std::swap(_u[a], _u[b]);
        }
      }

      void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) {
          return;
        }
        for (auto& r : _a) {
          std::swap(r[a], r[b]);
        }
        if (_track) {
          for (auto& r : _v) {
            std::swap(r[a], r[b]);
          }
        }
      }

      void negate_row(std::size_t k) {
        for (auto& x : _a[k]) {
          x = -x;
        }
        if (_track) {
          for (auto& x : _u[k]) {
            x = -x;
          }
        }
      }

      Dense       _a;
      Dense       _u;
      Dense       _v;
      std::size_t _rows = 0;
      std::size_t _cols = 0;
      bool        _track;
    };

    IntMatrix to_sparse(Dense const& d, std::size_t cols) {
      IntMatrix m(d.size(), cols);
      for (std::size_t i = 0; i < d.size(); ++i) {
        IntMatrix::row_type r;
        for (std::size_t j = 0; j < cols; ++j) {
          if (d[i][j] != 0) {
            r.push_back({j, d[i][j]});
          }
        }
        m.set_row(i, std::move(r));
      }
      return m;
    }

    ////////////////////////////////////////////////////////////////////
    // Sparse unit-pivot elimination
    ////////////////////////////////////////////////////////////////////

    class SparseEliminator {
     public:
      explicit SparseEliminator(IntMatrix const& m)
          : _cols(m.cols()),
            _rows(m.rows()),
            _row_alive(m.rows(), 1),
            _col_rows(m.cols()),
            _col_count(m.cols(), 0) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
          _rows[i] = m.row(i);
          for (auto const& e : _rows[i]) {
            _col_rows[e.col].push_back(i);
            ++_col_count[e.col];
          }
        }
        for (std::size_t i = 0; i < _rows.size(); ++i) {
          push_units(i);
        }
      }

      // Returns the number of unit pivots eliminated.
      std::size_t run() {
        std::size_t units = 0;
        while (!_heap.empty()) {
          auto [cost, i, c] = _heap.top();
          _heap.pop();
          if (!_row_alive[i]) {
            continue;
          }
          auto it = find_col(_rows[i], c);
          if (it == _rows[i].end() || it->col != c
              || cmpabs(it->value, 1) != 0) {
            continue;
          }
          auto now = markowitz(i, c);
          if (now > cost) {
            _heap.emplace(now, i, c);
            continue;
          }
          eliminate(i, c, it->value > 0);
          ++units;
        }
        return units;
      }

      // Live nonzero rows after elimination, with their column support.
      std::vector<IntMatrix::row_type const*> residual_rows() const {
        std::vector<IntMatrix::row_type const*> out;
        for (std::size_t i = 0; i < _rows.size(); ++i) {
          if (_row_alive[i] && !_rows[i].empty()) {
            out.push_back(&_rows[i]);
          }
        }
        return out;
      }

     private:
      using item = std::tuple<std::size_t, std::size_t, std::size_t>;

      std::size_t markowitz(std::size_t i, std::size_t c) const {
        return (_rows[i].size() - 1) * (_col_count[c] - 1);
      }

      void push_units(std::size_t i) {
        for (auto const& e : _rows[i]) {
          if (cmpabs(e.value, 1) == 0) {
            _heap.emplace(markowitz(i, e.col), i, e.col);
          }
        }
      }

      void eliminate(std::size_t r, std::size_t c, bool positive) {
        auto        pivot_row = _rows[r];
        auto const& users     = _col_rows[c];
        std::vector<std::size_t> targets;
        for (auto i : users) {
          if (i != r && _row_alive[i]) {
            auto it = find_col(_rows[i], c);
            if (it != _rows[i].end() && it->col == c) {
              targets.push_back(i);
            }
          }
        }
        std::sort(targets.begin(), targets.end());
        targets.erase(std::unique(targets.begin(), targets.end()),
                      targets.end());
        for (auto i : targets) {
          Integer f = find_col(_rows[i], c)->value;
          if (!positive) {
            f = -f;
          }
          subtract_multiple(i, pivot_row, f);
          push_units(i);
        }
        for (auto const& e : _rows[r]) {
          --_col_count[e.col];
        }
        _rows[r].clear();
        _row_alive[r] = 0;
        _col_rows[c].clear();
      }

      // row_i -= f * p
      void subtract_multiple(std::size_t                i,
                             IntMatrix::row_type const& p,
                             Integer const&             f) {
        auto&               a = _rows[i];
        IntMatrix::row_type out;
        out.reserve(a.size() + p.size());
        std::size_t x = 0, y = 0;
        while (x < a.size() || y < p.size()) {
          if (y == p.size() || (x < a.size() && a[x].col < p[y].col)) {
            out.push_back(std::move(a[x]));
            ++x;
          } else if (x == a.size() || p[y].col < a[x].col) {
            out.push_back({p[y].col, -f * p[y].value});
            ++_col_count[p[y].col];
            _col_rows[p[y].col].push_back(i);
            ++y;
          } else {
            Integer v = a[x].value - f * p[y].value;
            if (v != 0) {
              out.push_back({a[x].col, std::move(v)});
            } else {
              --_col_count[a[x].col];
            }
            ++x;
            ++y;
          }
        }
        a = std::move(out);
      }

      std::size_t                        _cols;
      std::vector<IntMatrix::row_type>   _rows;
      std::vector<char>                  _row_alive;
      std::vector<std::vector<std::size_t>> _col_rows;
      std::vector<std::size_t>           _col_count;
      std::priority_queue<item, std::vector<item>, std::greater<item>> _heap;
    };

  }  // namespace

  SnfResult smith_normal_form(IntMatrix const& m,
                              bool             want_transforms,
                              SnfLimits const& limits) {
    if (m.rows() > limits.max_rows || m.cols() > limits.max_cols) {
      throw ResourceError("SNF input " + std::to_string(m.rows()) + " x "
                          + std::to_string(m.cols())
                          + " exceeds the matrix size cap");
    }
    SnfResult result;
    if (want_transforms) {
      if (std::max(m.rows(), m.cols()) > limits.max_transform_dim) {
        throw ResourceError("SNF with transforms limited to dimension "
                            + std::to_string(limits.max_transform_dim));
      }
      Dense d(m.rows(), std::vector<Integer>(m.cols()));
      for (std::size_t i = 0; i < m.rows(); ++i) {
        for (auto const& e : m.row(i)) {
          d[i][e.col] = e.value;
        }
      }
      DenseSmith s(std::move(d), true);
      result.divisors = s.run();
      result.left     = to_sparse(s.left(), m.rows());
      result.right    = to_sparse(s.right(), m.cols());
      result.rank     = result.divisors.size();
      return result;
    }

    SparseEliminator elim(m);
    std::size_t      units    = elim.run();
    auto             residual = elim.residual_rows();

    std::vector<std::size_t> support;
    for (auto const* r : residual) {
      for (auto const& e : *r) {
        support.push_back(e.col);
      }
    }
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    if (residual.size() * support.size() > limits.max_dense_entries) {
      throw ResourceError("SNF residual block " + std::to_string(residual.size())
                          + " x " + std::to_string(support.size())
                          + " exceeds the dense cap");
    }
    Dense d(residual.size(), std::vector<Integer>(support.size()));
    for (std::size_t i = 0; i < residual.size(); ++i) {
      for (auto const& e : *residual[i]) {
        auto j = static_cast<std::size_t>(
            std::lower_bound(support.begin(), support.end(), e.col)
            - support.begin());
        d[i][j] = e.value;
      }
    }
    DenseSmith s(std::move(d), false);
    auto       tail = s.run();
    result.divisors.assign(units, Integer(1));
    result.divisors.insert(result.divisors.end(), tail.begin(), tail.end());
    result.rank = result.divisors.size();
    return result;
  }

  std::vector<std::size_t> nilpotent_row_degrees(IntMatrix const& n) {
    if (!n.is_square()) {
      throw ValidationError("nilpotent_row_degrees needs a square matrix");
    }
    std::vector<std::size_t> degree(n.rows(), 0);
    for (std::size_t i = 0; i < n.rows(); ++i) {
      for (auto const& e : n.row(i)) {
        if (e.col >= i || e.value < 0) {
          throw ValidationError(
              "matrix is not strictly lower triangular and nonnegative at ("
                  + std::to_string(i + 1) + ", " + std::to_string(e.col + 1)
                  + ")",
              i + 1);
        }
        degree[i] = std::max(degree[i], degree[e.col] + 1);
      }
    }
    return degree;
  }

}  // namespace fbc
