#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace fbc {

  using Integer = mpz_class;

  // Sparse integer matrix. Each row keeps its nonzero entries sorted by
  // column; zero entries are never stored.
  class IntMatrix {
   public:
    struct Entry {
      std::size_t col;
      Integer     value;
    };
    using row_type = std::vector<Entry>;

    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    // Dense literal, row-major. All rows must have equal length.
    IntMatrix(std::initializer_list<std::initializer_list<long>> dense);

    static IntMatrix identity(std::size_t n);

    std::size_t rows() const noexcept {
      return _rows.size();
    }
    std::size_t cols() const noexcept {
      return _cols;
    }
    std::size_t nonzeros() const noexcept;

    Integer at(std::size_t i, std::size_t j) const;
    void    set(std::size_t i, std::size_t j, Integer const& v);
    // Adds v to entry (i, j).
    void add_to(std::size_t i, std::size_t j, Integer const& v);

    row_type const& row(std::size_t i) const {
      return _rows.at(i);
    }
    // Replaces a row; `r` must be sorted by column with no zero values.
    void set_row(std::size_t i, row_type r);
    void append_row(row_type r);

    bool is_zero() const noexcept;
    bool is_square() const noexcept {
      return rows() == cols();
    }

    IntMatrix transpose() const;

    friend bool operator==(IntMatrix const& a, IntMatrix const& b);

   private:
    std::size_t           _cols = 0;
    std::vector<row_type> _rows;
  };

  IntMatrix operator*(IntMatrix const& a, IntMatrix const& b);
  IntMatrix operator-(IntMatrix const& a, IntMatrix const& b);
  IntMatrix matrix_power(IntMatrix const& a, std::size_t n);

  struct SnfLimits {
    std::size_t max_rows = 20000;
    std::size_t max_cols = 20000;
    // Residual block handed to the dense stage after unit elimination.
    std::size_t max_dense_entries = std::size_t(4) << 20;
    // Transforms are only tracked through the dense algorithm.
    std::size_t max_transform_dim = 400;
  };

  struct SnfResult {
    // Nonzero diagonal entries of the Smith form, d_1 | d_2 | ... | d_r,
    // all positive.
    std::vector<Integer> divisors;
    std::size_t          rank = 0;
    // Present when requested: U * M * V == D (rows x cols, divisors on the
    // diagonal, zero elsewhere), with U and V unimodular.
    std::optional<IntMatrix> left;
    std::optional<IntMatrix> right;
  };

  // Exact Smith normal form. Without transforms, unit pivots are eliminated
  // sparsely (Markowitz-style pivot choice), and the residual block is
  // reduced densely using minimal-norm pivots. With transforms, the dense
  // algorithm runs on the whole matrix while accumulating U and V.
  // Throws ResourceError when a cap in `limits` would be exceeded.
  SnfResult smith_normal_form(IntMatrix const& m,
                              bool             want_transforms = false,
                              SnfLimits const& limits = {});

  // Diagonal matrix of the given shape holding `divisors`.
  IntMatrix diagonal_matrix(std::size_t                 rows,
                            std::size_t                 cols,
                            std::vector<Integer> const& divisors);

  // For a strictly lower triangular nonnegative matrix N: entry i is the
  // largest k such that row i of N^k is nonzero (0 when row i itself is
  // zero). Throws ValidationError otherwise.
  std::vector<std::size_t> nilpotent_row_degrees(IntMatrix const& n);

}  // namespace fbc
