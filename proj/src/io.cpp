#include "lssdp/io.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace lssdp {

namespace {

// Tokenizer that tracks line numbers for error messages.
class Scanner {
 public:
  explicit Scanner(const std::string& text) : text_(text) {}

  bool next_token(std::string& tok) {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return false;
    const size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok = text_.substr(start, pos_ - start);
    return true;
  }

  std::string expect_token(const char* what) {
    std::string tok;
    if (!next_token(tok))
      throw Error(std::string("parse error: expected ") + what + " at line " +
                  std::to_string(line_));
    return tok;
  }

  long expect_int(const char* what) {
    const std::string tok = expect_token(what);
    try {
      size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw Error(std::string("parse error: non-integer token '") + tok + "' for " + what +
                  " at line " + std::to_string(line_));
    }
  }

  double expect_double(const char* what) {
    const std::string tok = expect_token(what);
    if (tok == "inf") return kInf;
    if (tok == "-inf") return -kInf;
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw Error(std::string("parse error: non-numeric token '") + tok + "' for " + what +
                  " at line " + std::to_string(line_));
    }
  }

  int line() const { return line_; }

 private:
  const std::string& text_;
  size_t pos_ = 0;
  int line_ = 1;
};

void fmt_double(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::pair<Mat, Vec> parse_biqmac(const std::string& text) {
  Scanner sc(text);
  const long n = sc.expect_int("variable count");
  const long nnz = sc.expect_int("entry count");
  if (n < 1) throw Error("parse_biqmac: malformed header, n < 1");
  Mat q = Mat::Zero(n, n);
  Vec c = Vec::Zero(n);
  for (long e = 0; e < nnz; ++e) {
    const long i = sc.expect_int("row index");
    const long j = sc.expect_int("col index");
    const double v = sc.expect_double("value");
    if (i < 1 || i > n || j < 1 || j > n)
      throw Error("parse_biqmac: index out of range at line " + std::to_string(sc.line()));
    if (i == j) {
      c(i - 1) += v;
    } else {
      q(i - 1, j - 1) += v;
      q(j - 1, i - 1) += v;
    }
  }
  return {q, c};
}

std::string print_biqmac(const Mat& q, const Vec& c) {
  const int n = static_cast<int>(q.rows());
  std::vector<std::string> lines;
  for (int i = 0; i < n; ++i) {
    if (c(i) != 0.0) {
      std::string l = std::to_string(i + 1) + " " + std::to_string(i + 1) + " ";
      fmt_double(l, c(i));
      lines.push_back(l);
    }
    for (int j = i + 1; j < n; ++j) {
      if (q(i, j) != 0.0) {
        std::string l = std::to_string(i + 1) + " " + std::to_string(j + 1) + " ";
        fmt_double(l, q(i, j));
        lines.push_back(l);
      }
    }
  }
  std::string out = std::to_string(n) + " " + std::to_string(lines.size()) + "\n";
  for (const auto& l : lines) out += l + "\n";
  return out;
}

Graph parse_rudy(const std::string& text) {
  Scanner sc(text);
  const long n = sc.expect_int("vertex count");
  const long m = sc.expect_int("edge count");
  if (n < 1) throw Error("parse_rudy: malformed header, n < 1");
  Graph g;
  g.nv = static_cast<int>(n);
  for (long e = 0; e < m; ++e) {
    long i = sc.expect_int("edge endpoint");
    long j = sc.expect_int("edge endpoint");
    const double w = sc.expect_double("edge weight");
    if (i < 1 || i > n || j < 1 || j > n || i == j)
      throw Error("parse_rudy: bad edge at line " + std::to_string(sc.line()));
    if (i > j) std::swap(i, j);
    g.edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1)});
    g.weights.push_back(w);
  }
  g.validate();
  return g;
}

std::string print_rudy(const Graph& g) {
  std::string out = std::to_string(g.nv) + " " + std::to_string(g.edges.size()) + "\n";
  for (size_t e = 0; e < g.edges.size(); ++e) {
    out += std::to_string(g.edges[e].first + 1) + " " + std::to_string(g.edges[e].second + 1) +
           " ";
    fmt_double(out, g.weights.empty() ? 1.0 : g.weights[e]);
    out += "\n";
  }
  return out;
}

std::pair<Mat, Mat> parse_qaplib(const std::string& text) {
  Scanner sc(text);
  const long n = sc.expect_int("dimension");
  if (n < 1) throw Error("parse_qaplib: malformed header, n < 1");
  Mat a(n, n), b(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) a(i, j) = sc.expect_double("entry of A");
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) b(i, j) = sc.expect_double("entry of B");
  return {a, b};
}

std::string print_qaplib(const Mat& a, const Mat& b) {
  const int n = static_cast<int>(a.rows());
  std::string out = std::to_string(n) + "\n";
  for (const Mat* m : {&a, &b}) {
    out += "\n";
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j) out += " ";
        fmt_double(out, (*m)(i, j));
      }
      out += "\n";
    }
  }
  return out;
}

namespace {

void print_stack(std::string& out, const ConstraintStack& stack) {
  for (int r = 0; r < stack.size(); ++r) {
    const auto& tri = stack.mat(r).triplets();
    out += "row " + std::to_string(r) + " " + std::to_string(tri.size()) + "\n";
    for (const auto& t : tri) {
      out += std::to_string(t.row) + " " + std::to_string(t.col) + " ";
      fmt_double(out, t.value);
      out += "\n";
    }
  }
}

ConstraintStack parse_stack(Scanner& sc, int n, int rows) {
  std::vector<SparseSymMat> mats;
  for (int r = 0; r < rows; ++r) {
    const std::string kw = sc.expect_token("'row'");
    if (kw != "row") throw Error("parse_instance: expected 'row' at line " +
                                 std::to_string(sc.line()));
    const long idx = sc.expect_int("row index");
    if (idx != r) throw Error("parse_instance: rows out of order at line " +
                              std::to_string(sc.line()));
    const long nnz = sc.expect_int("nnz");
    std::vector<Triplet> tri;
    for (long e = 0; e < nnz; ++e) {
      const long i = sc.expect_int("row index");
      const long j = sc.expect_int("col index");
      const double v = sc.expect_double("value");
      tri.push_back({static_cast<int>(i), static_cast<int>(j), v});
    }
    mats.emplace_back(n, tri);
  }
  return rows > 0 ? ConstraintStack(n, std::move(mats)) : ConstraintStack();
}

}  // namespace

std::string print_instance(const LssdpInstance& inst) {
  std::string out;
  out += "[meta]\n";
  out += "name " + (inst.name.empty() ? std::string("unnamed") : inst.name) + "\n";
  out += "family " + (inst.family.empty() ? std::string("custom") : inst.family) + "\n";
  out += "n " + std::to_string(inst.n()) + "\n";
  out += "mE " + std::to_string(inst.me()) + "\n";
  out += "mI " + std::to_string(inst.mi()) + "\n";
  out += "gamma ";
  fmt_double(out, inst.gamma);
  out += "\n";

  out += "[AE]\n";
  print_stack(out, inst.a_e);
  out += "[bE]\n";
  for (int i = 0; i < inst.me(); ++i) {
    fmt_double(out, inst.b_e(i));
    out += "\n";
  }
  out += "[AI]\n";
  print_stack(out, inst.a_i);
  out += "[G]\n";
  for (int i = 0; i < inst.n(); ++i) {
    for (int j = 0; j < inst.n(); ++j) {
      if (j) out += " ";
      fmt_double(out, inst.big_g(i, j));
    }
    out += "\n";
  }
  out += "[g]\n";
  for (int i = 0; i < inst.mi(); ++i) {
    fmt_double(out, inst.small_g(i));
    out += "\n";
  }

  // boxes: the modal bound pair as default plus explicit overrides
  auto modal_pair = [](auto&& visit) {
    std::map<std::pair<double, double>, int> counts;
    visit([&](double lo, double hi) { counts[{lo, hi}]++; });
    std::pair<double, double> best{-kInf, kInf};
    int most = -1;
    for (const auto& [pair, cnt] : counts) {
      if (cnt > most) {
        most = cnt;
        best = pair;
      }
    }
    return best;
  };

  out += "[P]\n";
  {
    const auto def = modal_pair([&](auto&& f) {
      for (int i = 0; i < inst.n(); ++i)
        for (int j = i; j < inst.n(); ++j) f(inst.p_box.lower(i, j), inst.p_box.upper(i, j));
    });
    out += "default ";
    fmt_double(out, def.first);
    out += " ";
    fmt_double(out, def.second);
    out += "\n";
    int overrides = 0;
    std::string body;
    for (int i = 0; i < inst.n(); ++i) {
      for (int j = i; j < inst.n(); ++j) {
        const double lo = inst.p_box.lower(i, j), hi = inst.p_box.upper(i, j);
        if (lo == def.first && hi == def.second) continue;
        body += "entry " + std::to_string(i) + " " + std::to_string(j) + " ";
        fmt_double(body, lo);
        body += " ";
        fmt_double(body, hi);
        body += "\n";
        ++overrides;
      }
    }
    out += "entries " + std::to_string(overrides) + "\n" + body;
  }

  out += "[K]\n";
  {
    const auto def = inst.mi() == 0 ? std::pair<double, double>{-kInf, kInf}
                                    : modal_pair([&](auto&& f) {
                                        for (int i = 0; i < inst.mi(); ++i)
                                          f(inst.k_box.lower(i), inst.k_box.upper(i));
                                      });
    out += "default ";
    fmt_double(out, def.first);
    out += " ";
    fmt_double(out, def.second);
    out += "\n";
    int overrides = 0;
    std::string body;
    for (int i = 0; i < inst.mi(); ++i) {
      const double lo = inst.k_box.lower(i), hi = inst.k_box.upper(i);
      if (lo == def.first && hi == def.second) continue;
      body += "entry " + std::to_string(i) + " ";
      fmt_double(body, lo);
      body += " ";
      fmt_double(body, hi);
      body += "\n";
      ++overrides;
    }
    out += "entries " + std::to_string(overrides) + "\n" + body;
  }
  return out;
}

LssdpInstance parse_instance(const std::string& text) {
  Scanner sc(text);
  auto expect_kw = [&](const char* kw) {
    const std::string tok = sc.expect_token(kw);
    if (tok != kw)
      throw Error(std::string("parse_instance: expected '") + kw + "', got '" + tok +
                  "' at line " + std::to_string(sc.line()));
  };

  LssdpInstance inst;
  expect_kw("[meta]");
  expect_kw("name");
  inst.name = sc.expect_token("name");
  expect_kw("family");
  inst.family = sc.expect_token("family");
  expect_kw("n");
  const int n = static_cast<int>(sc.expect_int("n"));
  expect_kw("mE");
  const int me = static_cast<int>(sc.expect_int("mE"));
  expect_kw("mI");
  const int mi = static_cast<int>(sc.expect_int("mI"));
  expect_kw("gamma");
  inst.gamma = sc.expect_double("gamma");

  expect_kw("[AE]");
  inst.a_e = parse_stack(sc, n, me);
  expect_kw("[bE]");
  inst.b_e.resize(me);
  for (int i = 0; i < me; ++i) inst.b_e(i) = sc.expect_double("b_E entry");
  expect_kw("[AI]");
  inst.a_i = parse_stack(sc, n, mi);
  expect_kw("[G]");
  inst.big_g.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inst.big_g(i, j) = sc.expect_double("G entry");
  expect_kw("[g]");
  inst.small_g.resize(mi);
  for (int i = 0; i < mi; ++i) inst.small_g(i) = sc.expect_double("g entry");

  expect_kw("[P]");
  expect_kw("default");
  {
    const double lo = sc.expect_double("P default lower");
    const double hi = sc.expect_double("P default upper");
    inst.p_box.lower = Mat::Constant(n, n, lo);
    inst.p_box.upper = Mat::Constant(n, n, hi);
    expect_kw("entries");
    const long cnt = sc.expect_int("override count");
    for (long e = 0; e < cnt; ++e) {
      expect_kw("entry");
      const long i = sc.expect_int("i");
      const long j = sc.expect_int("j");
      const double l = sc.expect_double("lower");
      const double h = sc.expect_double("upper");
      if (i < 0 || j < 0 || i >= n || j >= n)
        throw Error("parse_instance: P override out of range at line " +
                    std::to_string(sc.line()));
      inst.p_box.lower(i, j) = inst.p_box.lower(j, i) = l;
      inst.p_box.upper(i, j) = inst.p_box.upper(j, i) = h;
    }
  }
  expect_kw("[K]");
  expect_kw("default");
  {
    const double lo = sc.expect_double("K default lower");
    const double hi = sc.expect_double("K default upper");
    inst.k_box.lower = Vec::Constant(mi, lo);
    inst.k_box.upper = Vec::Constant(mi, hi);
    expect_kw("entries");
    const long cnt = sc.expect_int("override count");
    for (long e = 0; e < cnt; ++e) {
      expect_kw("entry");
      const long i = sc.expect_int("i");
      const double l = sc.expect_double("lower");
      const double h = sc.expect_double("upper");
      if (i < 0 || i >= mi)
        throw Error("parse_instance: K override out of range at line " +
                    std::to_string(sc.line()));
      inst.k_box.lower(i) = l;
      inst.k_box.upper(i) = h;
    }
  }
  inst.validate();
  return inst;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out.good()) throw Error("cannot write file: " + path);
  out << content;
  out.close();
  if (!out.good()) throw Error("write failed: " + path);
}

}  // namespace lssdp
