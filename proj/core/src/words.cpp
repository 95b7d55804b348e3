#include "fbc/words.hpp"

#include <string>

#include "fbc/errors.hpp"

namespace fbc {

  namespace {
    void check_range(std::span<letter_type const> raw, std::size_t rank) {
      for (auto a : raw) {
        if (a == 0 || generator_of(a) > rank) {
          throw InputError("generator index " + std::to_string(a)
                           + " out of range for rank "
                           + std::to_string(rank));
        }
      }
    }
  }  // namespace

  Word reduce(std::span<letter_type const> raw, std::size_t rank) {
    check_range(raw, rank);
    WordBuilder b(rank);
    b.reserve(raw.size());
    for (auto a : raw) {
      b.push(a);
    }
    return std::move(b).finish();
  }

  Word::Word(std::size_t rank, std::span<letter_type const> raw)
      : Word(reduce(raw, rank)) {}

  Word::Word(std::size_t rank, std::initializer_list<letter_type> raw)
      : Word(reduce(std::span<letter_type const>(raw.begin(), raw.size()),
                    rank)) {}

  Word Word::inverse() const {
    std::vector<letter_type> out(_letters.rbegin(), _letters.rend());
    for (auto& a : out) {
      a = -a;
    }
    return Word(_rank, std::move(out), trusted_tag{});
  }

  Word operator*(Word const& u, Word const& v) {
    Word r = u;
    r *= v;
    return r;
  }

  Word& Word::operator*=(Word const& v) {
    if (v._rank != _rank) {
      throw InputError("rank mismatch in word product");
    }
    for (auto a : v._letters) {
      if (!_letters.empty() && _letters.back() == -a) {
        _letters.pop_back();
      } else {
        _letters.push_back(a);
      }
    }
    return *this;
  }

  CyclicWord cyclically_reduce(Word const& w) {
    auto const& l   = w.letters();
    std::size_t lo  = 0;
    std::size_t hi  = l.size();
    while (hi - lo >= 2 && l[lo] == -l[hi - 1]) {
      ++lo;
      --hi;
    }
    std::vector<letter_type> core(l.begin() + lo, l.begin() + hi);
    return CyclicWord(Word(w.rank(), std::move(core), Word::trusted_tag{}));
  }

  Automorphism::Automorphism(std::size_t rank, std::vector<Word> images)
      : _rank(rank), _images(std::move(images)) {
    if (_images.size() != _rank) {
      throw InputError("automorphism of rank " + std::to_string(_rank)
                       + " needs " + std::to_string(_rank)
                       + " images, got " + std::to_string(_images.size()));
    }
    for (auto const& w : _images) {
      if (w.rank() != _rank) {
        throw InputError("image word has rank " + std::to_string(w.rank())
                         + ", expected " + std::to_string(_rank));
      }
    }
  }

  Automorphism Automorphism::identity(std::size_t rank) {
    std::vector<Word> images;
    images.reserve(rank);
    for (std::size_t i = 1; i <= rank; ++i) {
      images.emplace_back(rank, std::initializer_list<letter_type>{
                                    static_cast<letter_type>(i)});
    }
    return Automorphism(rank, std::move(images));
  }

  Word apply(Automorphism const& phi,
             Word const&         w,
             std::size_t&        cancellations) {
    if (phi.rank() != w.rank()) {
      throw InputError("rank mismatch: automorphism rank "
                       + std::to_string(phi.rank()) + ", word rank "
                       + std::to_string(w.rank()));
    }
    std::size_t total = 0;
    for (auto a : w.letters()) {
      total += phi.image(generator_of(a)).length();
    }
    WordBuilder b(phi.rank());
    b.reserve(total);
    for (auto a : w.letters()) {
      auto const& img = phi.image(generator_of(a));
      if (a > 0) {
        b.append(img);
      } else {
        b.append_inverse(img);
      }
    }
    cancellations = b.cancellations();
    return std::move(b).finish();
  }

  Word apply(Automorphism const& phi, Word const& w) {
    std::size_t ignored = 0;
    return apply(phi, w, ignored);
  }

  Automorphism compose(Automorphism const& phi, Automorphism const& psi) {
    if (phi.rank() != psi.rank()) {
      throw InputError("rank mismatch in compose");
    }
    std::vector<Word> images;
    images.reserve(phi.rank());
    for (auto const& img : psi.images()) {
      images.push_back(apply(phi, img));
    }
    return Automorphism(phi.rank(), std::move(images));
  }

  Automorphism power(Automorphism const& phi, std::size_t n) {
    auto result = Automorphism::identity(phi.rank());
    for (std::size_t k = 0; k < n; ++k) {
      result = compose(phi, result);
    }
    return result;
  }

  std::vector<std::uint64_t> iterate_lengths(Automorphism const& phi,
                                             CyclicWord const&   g,
                                             std::size_t         n_max,
                                             std::size_t letter_cap) {
    if (n_max < 1) {
      throw PreconditionError("iterate_lengths needs n_max >= 1");
    }
    if (phi.rank() != g.rank()) {
      throw InputError("rank mismatch in iterate_lengths");
    }
    std::vector<std::uint64_t> out;
    out.reserve(n_max + 1);
    CyclicWord current = g;
    out.push_back(current.length());
    for (std::size_t k = 1; k <= n_max; ++k) {
      std::size_t next_len = 0;
      for (auto a : current.letters()) {
        next_len += phi.image(generator_of(a)).length();
      }
      if (next_len > letter_cap) {
        throw ResourceError("iterate_lengths: word length "
                            + std::to_string(next_len) + " at step "
                            + std::to_string(k) + " exceeds cap");
      }
      current = cyclically_reduce(apply(phi, current.word()));
      out.push_back(current.length());
    }
    return out;
  }

}  // namespace fbc
