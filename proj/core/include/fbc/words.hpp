#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace fbc {

  // A letter is a signed generator index: +i is x_i, -i is x_i^-1, i >= 1.
  using letter_type = std::int32_t;

  inline constexpr letter_type inverse(letter_type a) noexcept {
    return -a;
  }

  inline constexpr std::size_t generator_of(letter_type a) noexcept {
    return static_cast<std::size_t>(a < 0 ? -a : a);
  }

  class CyclicWord;

  // Freely reduced word in the free group of rank `rank`.
  class Word {
   public:
    Word() = default;
    explicit Word(std::size_t rank) : _rank(rank) {}

    // Reduces `raw`; throws InputError if an index is 0 or exceeds rank.
    Word(std::size_t rank, std::span<letter_type const> raw);
    Word(std::size_t rank, std::initializer_list<letter_type> raw);

    std::size_t rank() const noexcept {
      return _rank;
    }
    std::size_t length() const noexcept {
      return _letters.size();
    }
    bool empty() const noexcept {
      return _letters.empty();
    }
    std::vector<letter_type> const& letters() const noexcept {
      return _letters;
    }
    letter_type operator[](std::size_t i) const {
      return _letters[i];
    }

    Word inverse() const;

    // Concatenation followed by free reduction.
    friend Word operator*(Word const& u, Word const& v);
    Word& operator*=(Word const& v);

    friend bool operator==(Word const&, Word const&) = default;
    friend auto operator<=>(Word const&, Word const&) = default;

   private:
    struct trusted_tag {};
    Word(std::size_t rank, std::vector<letter_type> reduced, trusted_tag)
        : _rank(rank), _letters(std::move(reduced)) {}

    friend Word       reduce(std::span<letter_type const>, std::size_t);
    friend CyclicWord cyclically_reduce(Word const&);
    friend class CyclicWord;
    friend class WordBuilder;

    std::size_t              _rank = 0;
    std::vector<letter_type> _letters;
  };

  // Cyclically reduced word; the conjugacy class representative whose
  // length is |g bar|.
  class CyclicWord {
   public:
    CyclicWord() = default;

    std::size_t rank() const noexcept {
      return _word.rank();
    }
    std::size_t length() const noexcept {
      return _word.length();
    }
    Word const& word() const noexcept {
      return _word;
    }
    std::vector<letter_type> const& letters() const noexcept {
      return _word.letters();
    }

    friend bool operator==(CyclicWord const&, CyclicWord const&) = default;

   private:
    explicit CyclicWord(Word w) : _word(std::move(w)) {}
    friend CyclicWord cyclically_reduce(Word const&);

    Word _word;
  };

  // Stack-based accumulator that keeps its contents freely reduced while
  // letters are appended. Used by apply() and by the rewriting code so that
  // large images are never materialised unreduced.
  class WordBuilder {
   public:
    explicit WordBuilder(std::size_t rank) : _rank(rank) {}

    void push(letter_type a) {
      if (!_stack.empty() && _stack.back() == -a) {
        _stack.pop_back();
        ++_cancelled;
      } else {
        _stack.push_back(a);
      }
    }
    void append(Word const& w) {
      for (auto a : w.letters()) {
        push(a);
      }
    }
    void append_inverse(Word const& w) {
      auto const& l = w.letters();
      for (auto it = l.rbegin(); it != l.rend(); ++it) {
        push(-*it);
      }
    }
    void reserve(std::size_t n) {
      _stack.reserve(n);
    }

    // Number of letter pairs removed by free reduction so far.
    std::size_t cancellations() const noexcept {
      return _cancelled;
    }

    Word finish() && {
      return Word(_rank, std::move(_stack), Word::trusted_tag{});
    }

   private:
    std::size_t              _rank;
    std::vector<letter_type> _stack;
    std::size_t              _cancelled = 0;
  };

  // Substitution endomorphism x_i -> images[i-1]. Invertibility is not
  // checked here.
  class Automorphism {
   public:
    Automorphism() = default;
    Automorphism(std::size_t rank, std::vector<Word> images);

    static Automorphism identity(std::size_t rank);

    std::size_t rank() const noexcept {
      return _rank;
    }
    std::vector<Word> const& images() const noexcept {
      return _images;
    }
    // Image of generator i, 1-based.
    Word const& image(std::size_t i) const {
      return _images.at(i - 1);
    }

    friend bool operator==(Automorphism const&, Automorphism const&)
        = default;

   private:
    std::size_t       _rank = 0;
    std::vector<Word> _images;
  };

  Word       reduce(std::span<letter_type const> raw, std::size_t rank);
  CyclicWord cyclically_reduce(Word const& w);

  // The three-argument overload also reports how many letter pairs free
  // reduction removed.
  Word apply(Automorphism const& phi, Word const& w);
  Word apply(Automorphism const& phi,
             Word const&         w,
             std::size_t&        cancellations);

  // compose(phi, psi)(w) == phi(psi(w)).
  Automorphism compose(Automorphism const& phi, Automorphism const& psi);
  Automorphism power(Automorphism const& phi, std::size_t n);

  // Entry k is |phi^k(g)| after cyclic reduction, k = 0..n_max. Words whose
  // length would exceed `letter_cap` raise ResourceError.
  std::vector<std::uint64_t> iterate_lengths(Automorphism const& phi,
                                             CyclicWord const&   g,
                                             std::size_t         n_max,
                                             std::size_t letter_cap
                                             = std::size_t(1) << 26);

}  // namespace fbc
