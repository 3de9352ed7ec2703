#pragma once

#include <cstdint>   // for int64_t
#include <memory>    // for shared_ptr
#include <optional>  // for optional
#include <string>    // for string
#include <utility>   // for move
#include <vector>    // for vector

#include "finite_group.hpp"  // for FiniteMetricGroup
#include "rational.hpp"      // for Rational

namespace graev {

  // Runtime interface for a factor of an amalgam: a group with a tsi metric.
  template <typename E>
  class MetricGroup {
   public:
    using element_type = E;

    virtual ~MetricGroup() = default;

    virtual std::string name() const                          = 0;
    virtual E           identity() const                      = 0;
    virtual E           multiply(E const& x, E const& y) const = 0;
    virtual E           inverse(E const& x) const              = 0;
    virtual Rational    distance(E const& x, E const& y) const = 0;
    virtual std::string element_name(E const& x) const         = 0;
    // every element when the group is finite
    virtual std::optional<std::vector<E>> elements() const = 0;
  };

  template <typename E>
  using FactorPtr = std::shared_ptr<MetricGroup<E> const>;

  class FiniteFactor : public MetricGroup<std::int64_t> {
   public:
    explicit FiniteFactor(FiniteMetricGroup G) : _G(std::move(G)) {}

    std::string name() const override {
      return _G.name();
    }
    std::int64_t identity() const override {
      return _G.identity();
    }
    std::int64_t multiply(std::int64_t const& x, std::int64_t const& y) const override {
      return _G.multiply(x, y);
    }
    std::int64_t inverse(std::int64_t const& x) const override {
      return _G.inverse(x);
    }
    Rational distance(std::int64_t const& x, std::int64_t const& y) const override {
      return _G.distance(x, y);
    }
    std::string element_name(std::int64_t const& x) const override {
      return _G.element_name(x);
    }
    std::optional<std::vector<std::int64_t>> elements() const override {
      std::vector<std::int64_t> v;
      for (std::size_t i = 0; i < _G.order(); ++i) {
        v.push_back(static_cast<std::int64_t>(i));
      }
      return v;
    }
    FiniteMetricGroup const& group() const noexcept {
      return _G;
    }

   private:
    FiniteMetricGroup _G;
  };

  // <t> = Z written multiplicatively, d(t^j, t^k) = scale * |j - k|.
  class IntegerLine : public MetricGroup<std::int64_t> {
   public:
    explicit IntegerLine(std::string letter = "t", Rational scale = Rational(1))
        : _letter(std::move(letter)), _scale(scale) {}

    std::string name() const override {
      return "<" + _letter + ">";
    }
    std::int64_t identity() const override {
      return 0;
    }
    std::int64_t multiply(std::int64_t const& x, std::int64_t const& y) const override {
      return x + y;
    }
    std::int64_t inverse(std::int64_t const& x) const override {
      return -x;
    }
    Rational distance(std::int64_t const& x, std::int64_t const& y) const override {
      return _scale * Rational(x > y ? x - y : y - x);
    }
    std::string element_name(std::int64_t const& x) const override {
      if (x == 0) {
        return "e";
      }
      if (x == 1) {
        return _letter;
      }
      return _letter + "^" + std::to_string(x);
    }
    std::optional<std::vector<std::int64_t>> elements() const override {
      return std::nullopt;
    }
    std::string const& letter() const noexcept {
      return _letter;
    }

   private:
    std::string _letter;
    Rational    _scale;
  };

}  // namespace graev
