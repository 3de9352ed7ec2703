#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "graev/graev.hpp"

namespace fx {

  using graev::Rational;

  inline graev::FiniteMetricGroup z2(Rational d = Rational(1)) {
    return graev::cyclic_group("Z2", {Rational(0), d}, {"e", "a"});
  }

  inline graev::FiniteMetricGroup z3() {
    return graev::cyclic_group("Z3", {Rational(0), Rational(1), Rational(1)}, {"e", "b", "b2"});
  }

  // Klein four-group with the Hamming metric: e=00, p=10, q=01, pq=11
  inline graev::FiniteMetricGroup klein() {
    graev::Table T{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    return graev::from_norm("V", {"e", "p", "q", "pq"}, T,
                            {Rational(0), Rational(1), Rational(1), Rational(2)});
  }

  inline graev::FiniteMetricGroup z4(std::vector<Rational> norm = {Rational(0), Rational(3, 4),
                                                                   Rational(1), Rational(3, 4)}) {
    return graev::cyclic_group("Z4", std::move(norm), {"e", "r", "r2", "r3"});
  }

  inline graev::AmalgamSystem free_z2_z3() {
    return graev::free_product_system({z2(), z3()});
  }

  // V *_A Z4 with A = {e,p} = {e,r2}
  inline graev::AmalgamSystem amalgam_v4_z4() {
    auto A = graev::cyclic_group("A", {Rational(0), Rational(1)}, {"e", "p"});
    return graev::AmalgamSystem{{klein(), z4()}, A, {{0, 1}, {0, 2}}};
  }

  inline graev::FiniteLetter L(graev::FiniteAmalgam const& S, int f, std::int64_t x) {
    return S.letter(f, x);
  }

  // A random word with letters from the whole union alphabet.
  inline graev::FiniteWord random_word(graev::FiniteAmalgam const& S, std::mt19937_64& rng,
                                       std::size_t len) {
    auto                                  G = S.alphabet();
    std::uniform_int_distribution<size_t> pick(0, G.size() - 1);
    graev::FiniteWord                     w;
    for (std::size_t i = 0; i < len; ++i) {
      w.push_back(G[pick(rng)]);
    }
    return w;
  }

  // A random rational pointed space on k points: distances from {1..4}/2
  // repaired by shortest paths.
  inline graev::PointedMetricSpace random_space(std::mt19937_64& rng, std::size_t k) {
    std::uniform_int_distribution<int> pick(1, 8);
    graev::Matrix                      M(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        M[i][j] = M[j][i] = Rational(pick(rng), 4);
      }
    }
    for (std::size_t m = 0; m < k; ++m) {
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          if (M[i][m] + M[m][j] < M[i][j]) {
            M[i][j] = M[i][m] + M[m][j];
          }
        }
      }
    }
    graev::PointedMetricSpace X{"X", {}, M};
    for (std::size_t i = 0; i < k; ++i) {
      X.points.push_back(i == 0 ? "e" : "x" + std::to_string(i));
    }
    return X;
  }

  inline graev::FiniteMetricGroup zn(int n) {
    std::vector<Rational>    norm(n, Rational(1));
    std::vector<std::string> names;
    norm[0] = Rational(0);
    for (int i = 0; i < n; ++i) {
      names.push_back(std::to_string(i));
    }
    return graev::cyclic_group("Z" + std::to_string(n), norm, names);
  }

  // S3 as permutations of {0,1,2}, discrete metric
  inline graev::FiniteMetricGroup s3() {
    std::vector<std::array<int, 3>> P;
    std::array<int, 3>              p{0, 1, 2};
    do {
      P.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    graev::Table T(6, graev::Table::value_type(6));
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        std::array<int, 3> c{P[i][P[j][0]], P[i][P[j][1]], P[i][P[j][2]]};
        T[i][j] = std::find(P.begin(), P.end(), c) - P.begin();
      }
    }
    std::vector<std::string> names{"e", "s12", "s01", "c1", "c2", "s02"};
    std::vector<Rational>    norm(6, Rational(1));
    norm[0] = Rational(0);
    return graev::from_norm("S3", names, T, norm);
  }

  // a random descending chain of normal subgroups, possibly with repeats
  inline graev::BKFamily random_family(graev::FiniteMetricGroup const& G, std::mt19937_64& rng) {
    auto     N = graev::normal_subgroups(G);
    graev::BKFamily F{{N.front()}, true};
    std::uniform_int_distribution<int> len(1, 5);
    int                                steps = len(rng);
    for (int s = 0; s < steps; ++s) {
      std::vector<graev::ElementSet> inside;
      for (auto const& H : N) {
        if (std::includes(F.levels.back().begin(), F.levels.back().end(), H.begin(), H.end())) {
          inside.push_back(H);
        }
      }
      std::uniform_int_distribution<std::size_t> pick(0, inside.size() - 1);
      F.levels.push_back(inside[pick(rng)]);
    }
    if (F.levels.back() != graev::ElementSet{G.identity()}) {
      F.levels.push_back({G.identity()});
    }
    return F;
  }

}  // namespace fx
