#pragma once

// Plain-text dump of a ConicProblem, for cross-checking with external solvers.
//
//   fdswipt-conic 1
//   blocks <count>
//   <kind> <dim>                      one line per block; kind in H S L F
//   objective <entries>
//   <block> <i> <j> <re> <im>         one line per entry, i <= j, 0-based
//   constraints <count>
//   <rel> <rhs> <entries>             rel is "=" or ">="
//   <block> <i> <j> <re> <im>
//   ...
//   end
//
// Coefficient matrices are Hermitian; only the upper triangle is listed and
// the lower triangle is its conjugate. Values use 17 significant digits so a
// dump parses back to the identical problem.

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>

#include "fdswipt/sdp/conic_problem.hpp"

namespace fdswipt::sdp {

namespace detail {

inline char kind_code(BlockKind k) {
  switch (k) {
    case BlockKind::kHermitianPsd: return 'H';
    case BlockKind::kSymmetricPsd: return 'S';
    case BlockKind::kNonneg: return 'L';
    case BlockKind::kFree: return 'F';
  }
  return '?';
}

struct Entry {
  int block, i, j;
  Complex v;
};

inline std::vector<Entry> entries_of(const LinearFunctional& f) {
  std::vector<Entry> out;
  auto terms = f.terms();
  std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [b, c] : terms) {
    for (int i = 0; i < c.rows(); ++i) {
      for (int j = i; j < c.cols(); ++j) {
        if (c(i, j) != Complex(0.0, 0.0)) out.push_back({b, i, j, c(i, j)});
      }
    }
  }
  return out;
}

inline void write_entries(std::ostream& os, const std::vector<Entry>& es) {
  for (const auto& e : es) {
    os << e.block << ' ' << e.i << ' ' << e.j << ' ' << e.v.real() << ' ' << e.v.imag() << '\n';
  }
}

}  // namespace detail

inline void write_problem(std::ostream& os, const ConicProblem& p) {
  os << std::setprecision(17);
  os << "fdswipt-conic 1\n";
  os << "blocks " << p.blocks.size() << '\n';
  for (const auto& b : p.blocks) os << detail::kind_code(b.kind) << ' ' << b.dim << '\n';
  const auto obj = detail::entries_of(p.objective);
  os << "objective " << obj.size() << '\n';
  detail::write_entries(os, obj);
  os << "constraints " << p.constraints.size() << '\n';
  for (const auto& c : p.constraints) {
    const auto es = detail::entries_of(c.lhs);
    os << (c.relation == Relation::kEqual ? "=" : ">=") << ' ' << c.rhs << ' ' << es.size() << '\n';
    detail::write_entries(os, es);
  }
  os << "end\n";
}

inline std::string to_text(const ConicProblem& p) {
  std::ostringstream os;
  write_problem(os, p);
  return os.str();
}

inline ConicProblem read_problem(std::istream& is) {
  auto fail = [](const std::string& what) -> ConicProblem {
    throw ContractViolation("conic problem text: " + what);
  };
  auto expect_word = [&](const char* w) {
    std::string tok;
    if (!(is >> tok) || tok != w) fail(std::string("expected '") + w + "'");
  };

  ConicProblem p;
  int version = 0;
  expect_word("fdswipt-conic");
  if (!(is >> version) || version != 1) return fail("unsupported version");

  std::size_t nblocks = 0;
  expect_word("blocks");
  if (!(is >> nblocks)) return fail("bad block count");
  for (std::size_t b = 0; b < nblocks; ++b) {
    char code = 0;
    int dim = 0;
    if (!(is >> code >> dim) || dim < 1) return fail("bad block line");
    switch (code) {
      case 'H': p.add_block(hermitian_psd(dim)); break;
      case 'S': p.add_block(symmetric_psd(dim)); break;
      case 'L': p.add_block(nonneg_scalar()); break;
      case 'F': p.add_block(free_scalar()); break;
      default: return fail(std::string("unknown block kind '") + code + "'");
    }
  }

  auto read_functional = [&](std::size_t count) {
    LinearFunctional f;
    for (std::size_t e = 0; e < count; ++e) {
      int b = 0, i = 0, j = 0;
      double re = 0, im = 0;
      if (!(is >> b >> i >> j >> re >> im)) fail("bad entry line");
      if (b < 0 || b >= static_cast<int>(p.blocks.size())) fail("entry references undeclared block");
      const int n = p.blocks[b].dim;
      if (i < 0 || j < i || j >= n) fail("entry index out of range");
      ComplexMatrix c = ComplexMatrix::Zero(n, n);
      c(i, j) = Complex(re, im);
      if (i != j) c(j, i) = std::conj(c(i, j));
      f.add(b, c);
    }
    return f;
  };

  std::size_t nobj = 0;
  expect_word("objective");
  if (!(is >> nobj)) return fail("bad objective count");
  p.objective = read_functional(nobj);

  std::size_t ncons = 0;
  expect_word("constraints");
  if (!(is >> ncons)) return fail("bad constraint count");
  for (std::size_t c = 0; c < ncons; ++c) {
    std::string rel;
    double rhs = 0;
    std::size_t n = 0;
    if (!(is >> rel >> rhs >> n)) return fail("bad constraint header");
    Relation r;
    if (rel == "=") {
      r = Relation::kEqual;
    } else if (rel == ">=") {
      r = Relation::kGreaterEqual;
    } else {
      return fail("unknown relation '" + rel + "'");
    }
    p.add_constraint(read_functional(n), r, rhs);
  }
  expect_word("end");
  p.validate();
  return p;
}

inline ConicProblem parse_problem(const std::string& text) {
  std::istringstream is(text);
  return read_problem(is);
}

}  // namespace fdswipt::sdp
