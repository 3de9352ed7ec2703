#pragma once

#include <algorithm>         // for sort, unique, binary_search
#include <compare>           // for operator<=>
#include <cstddef>           // for size_t
#include <initializer_list>  // for initializer_list
#include <stdexcept>         // for out_of_range
#include <string>            // for string
#include <utility>           // for move
#include <vector>            // for vector

namespace graev {

  // A finite word, indexed from 1 as w(1), ..., w(n).  The empty word stands
  // for the identity.
  template <typename L>
  class Word {
   public:
    using letter_type = L;

    Word() = default;
    Word(std::initializer_list<L> il) : _letters(il) {}
    explicit Word(std::vector<L> v) : _letters(std::move(v)) {}
    Word(std::size_t n, L const& x) : _letters(n, x) {}

    std::size_t size() const noexcept {
      return _letters.size();
    }
    bool empty() const noexcept {
      return _letters.empty();
    }

    L const& operator()(std::size_t i) const {
      check(i);
      return _letters[i - 1];
    }
    L& operator()(std::size_t i) {
      check(i);
      return _letters[i - 1];
    }

    std::vector<L> const& letters() const noexcept {
      return _letters;
    }

    void push_back(L const& x) {
      _letters.push_back(x);
    }

    auto begin() const noexcept {
      return _letters.begin();
    }
    auto end() const noexcept {
      return _letters.end();
    }

    auto operator<=>(Word const&) const = default;
    bool operator==(Word const&) const  = default;

   private:
    void check(std::size_t i) const {
      if (i == 0 || i > _letters.size()) {
        throw std::out_of_range("word index " + std::to_string(i)
                                + " outside [1," + std::to_string(_letters.size())
                                + "]");
      }
    }

    std::vector<L> _letters;
  };

  template <typename L>
  Word<L> concat(Word<L> const& u, Word<L> const& v) {
    std::vector<L> out(u.letters());
    out.insert(out.end(), v.begin(), v.end());
    return Word<L>(std::move(out));
  }

  // Sorted duplicate-free set of positive integers.
  class IndexSet {
   public:
    IndexSet() = default;
    IndexSet(std::initializer_list<std::size_t> il) : IndexSet(std::vector<std::size_t>(il)) {}
    explicit IndexSet(std::vector<std::size_t> v) : _v(std::move(v)) {
      std::sort(_v.begin(), _v.end());
      _v.erase(std::unique(_v.begin(), _v.end()), _v.end());
      if (!_v.empty() && _v.front() == 0) {
        throw std::out_of_range("index sets hold positive integers");
      }
    }

    // [lo, hi]; empty when lo > hi
    static IndexSet interval(std::size_t lo, std::size_t hi) {
      std::vector<std::size_t> v;
      for (std::size_t i = lo; i <= hi && lo <= hi; ++i) {
        v.push_back(i);
      }
      return IndexSet(std::move(v));
    }

    std::size_t m() const {
      nonempty();
      return _v.front();
    }
    std::size_t M() const {
      nonempty();
      return _v.back();
    }

    bool contains(std::size_t i) const {
      return std::binary_search(_v.begin(), _v.end(), i);
    }
    bool is_interval() const {
      return _v.empty() || _v.back() - _v.front() + 1 == _v.size();
    }

    std::size_t size() const noexcept {
      return _v.size();
    }
    bool empty() const noexcept {
      return _v.empty();
    }
    std::vector<std::size_t> const& values() const noexcept {
      return _v;
    }
    auto begin() const noexcept {
      return _v.begin();
    }
    auto end() const noexcept {
      return _v.end();
    }

    IndexSet minus(IndexSet const& other) const {
      std::vector<std::size_t> out;
      for (auto i : _v) {
        if (!other.contains(i)) {
          out.push_back(i);
        }
      }
      return IndexSet(std::move(out));
    }
    IndexSet unite(IndexSet const& other) const {
      std::vector<std::size_t> out(_v);
      out.insert(out.end(), other._v.begin(), other._v.end());
      return IndexSet(std::move(out));
    }
    bool intersects(IndexSet const& other) const {
      for (auto i : _v) {
        if (other.contains(i)) {
          return true;
        }
      }
      return false;
    }

    auto operator<=>(IndexSet const&) const = default;
    bool operator==(IndexSet const&) const  = default;

    std::string to_string() const {
      if (_v.empty()) {
        return "{}";
      }
      if (is_interval() && _v.size() > 1) {
        return "[" + std::to_string(m()) + "," + std::to_string(M()) + "]";
      }
      std::string s = "{";
      for (std::size_t k = 0; k < _v.size(); ++k) {
        s += (k ? "," : "") + std::to_string(_v[k]);
      }
      return s + "}";
    }

   private:
    void nonempty() const {
      if (_v.empty()) {
        throw std::out_of_range("m/M of an empty index set");
      }
    }
    std::vector<std::size_t> _v;
  };

  template <typename L>
  Word<L> subword(Word<L> const& w, IndexSet const& F) {
    std::vector<L> out;
    out.reserve(F.size());
    for (auto i : F) {
      out.push_back(w(i));  // throws on i > |w|
    }
    return Word<L>(std::move(out));
  }

  // Splits F into runs I_1 < I_2 < ... with M(I_k) + 1 < m(I_{k+1}).
  inline std::vector<IndexSet> maximal_subintervals(IndexSet const& F) {
    std::vector<IndexSet>    out;
    std::vector<std::size_t> run;
    for (auto i : F) {
      if (!run.empty() && i != run.back() + 1) {
        out.emplace_back(std::move(run));
        run.clear();
      }
      run.push_back(i);
    }
    if (!run.empty()) {
      out.emplace_back(std::move(run));
    }
    return out;
  }

  // l(i) is a factor id, or 0 for "lies in the common subgroup".
  using Label = Word<int>;

  // Outcome of a validator: ok, or the first failed condition with witnesses.
  struct Report {
    bool        ok = true;
    std::string item;
    std::string message;

    explicit operator bool() const noexcept {
      return ok;
    }
    static Report pass() {
      return {};
    }
    static Report fail(std::string item, std::string message) {
      return Report{false, std::move(item), std::move(message)};
    }
    std::string to_string() const {
      return ok ? std::string("ok") : "FAIL [" + item + "] " + message;
    }
  };

}  // namespace graev
