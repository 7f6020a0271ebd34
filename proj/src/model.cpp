#include "halfloop/model.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace halfloop {

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::inner_gaudin: return "inner-gaudin";
    case ModelKind::outer_gaudin: return "outer-gaudin";
    case ModelKind::dunkl: return "dunkl";
  }
  return "?";
}

namespace {

// Offset into the text where parsing failed, for column reporting.
struct ScalarError {
  std::size_t at;
  std::string msg;
};

class ScalarParser {
 public:
  explicit ScalarParser(const std::string& s) : s_(s) {}

  CycNum parse() {
    CycNum v = expr();
    skip();
    if (pos_ != s_.size()) throw ScalarError{pos_, "unexpected '" + std::string(1, s_[pos_]) + "'"};
    return v;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  long integer() {
    skip();
    const bool neg = eat('-');
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) throw ScalarError{pos_, "expected an integer"};
    const long v = std::stol(s_.substr(start, pos_ - start));
    return neg ? -v : v;
  }
  CycNum expr() {
    CycNum v = term();
    for (;;) {
      if (eat('+'))
        v += term();
      else if (eat('-'))
        v -= term();
      else
        return v;
    }
  }
  CycNum term() {
    CycNum v = unary();
    for (;;) {
      if (eat('*')) {
        v *= unary();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        const CycNum d = unary();
        if (d.is_zero()) throw ScalarError{at, "division by zero"};
        v = v / d;
      } else {
        return v;
      }
    }
  }
  CycNum unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  CycNum atom() {
    skip();
    if (pos_ >= s_.size()) throw ScalarError{pos_, "expected a value"};
    if (eat('(')) {
      CycNum v = expr();
      if (!eat(')')) throw ScalarError{pos_, "expected ')'"};
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return CycNum(BigInt(s_.substr(start, pos_ - start)));
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string id = s_.substr(start, pos_ - start);
    if (id == "i") return CycNum::root(4, 1);
    if (id == "zeta") {
      if (!eat('(')) throw ScalarError{pos_, "expected '(' after zeta"};
      const std::size_t at = pos_;
      const long m = integer();
      if (!eat(',')) throw ScalarError{pos_, "expected ','"};
      const long k = integer();
      if (!eat(')')) throw ScalarError{pos_, "expected ')'"};
      if (m < 1) throw ScalarError{at, "zeta order must be positive"};
      return CycNum::root(m, k);
    }
    throw ScalarError{start, id.empty() ? "unexpected '" + std::string(1, s_[start]) + "'" : "unknown name '" + id + "'"};
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Entry {
  std::string value;
  int line = 0;
  std::size_t col = 0;  // 1-based column of the value
};

class Reader {
 public:
  Reader(std::string origin, std::map<std::string, Entry> entries)
      : origin_(std::move(origin)), entries_(std::move(entries)) {}

  [[noreturn]] void fail(const Entry& e, std::size_t offset, const std::string& msg) const {
    throw ModelError(origin_ + ":" + std::to_string(e.line) + ":" + std::to_string(e.col + offset) + ": " + msg);
  }
  [[noreturn]] void fail_file(const std::string& msg) const { throw ModelError(origin_ + ": " + msg); }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }
  const Entry& get(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) fail_file("missing key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  // Comma-separated items with their offsets inside the value.
  std::vector<std::pair<std::string, std::size_t>> items(const Entry& e) const {
    std::vector<std::pair<std::string, std::size_t>> out;
    std::size_t start = 0, depth = 0;
    for (std::size_t k = 0; k <= e.value.size(); ++k) {
      if (k < e.value.size() && e.value[k] == '(') ++depth;
      if (k < e.value.size() && e.value[k] == ')' && depth) --depth;
      if (k == e.value.size() || (e.value[k] == ',' && depth == 0)) {
        std::string raw = e.value.substr(start, k - start);
        std::size_t lead = 0;
        while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
        out.emplace_back(trim(raw), start + lead);
        start = k + 1;
      }
    }
    return out;
  }

  CycNum scalar_at(const Entry& e, const std::string& text, std::size_t offset) const {
    try {
      return ScalarParser(text).parse();
    } catch (const ScalarError& err) {
      fail(e, offset + err.at, err.msg);
    }
  }

  long integer(const std::string& key) {
    const Entry& e = get(key);
    const CycNum v = scalar_at(e, e.value, 0);
    if (!v.is_rational() || v.rational_value().get_den() != 1) fail(e, 0, "'" + key + "' must be an integer");
    return v.rational_value().get_num().get_si();
  }
  long integer_or(const std::string& key, long dflt) { return has(key) ? integer(key) : dflt; }

  std::vector<int> integers(const std::string& key) {
    const Entry& e = get(key);
    std::vector<int> out;
    for (const auto& [text, off] : items(e)) {
      const CycNum v = scalar_at(e, text, off);
      if (!v.is_rational() || v.rational_value().get_den() != 1) fail(e, off, "expected an integer");
      out.push_back(static_cast<int>(v.rational_value().get_num().get_si()));
    }
    return out;
  }

  std::vector<BigRational> rationals(const std::string& key) {
    const Entry& e = get(key);
    std::vector<BigRational> out;
    for (const auto& [text, off] : items(e)) {
      const CycNum v = scalar_at(e, text, off);
      if (!v.is_rational()) fail(e, off, "expected a rational number");
      out.push_back(v.rational_value());
    }
    return out;
  }

  std::vector<CycNum> scalars(const std::string& key) {
    const Entry& e = get(key);
    std::vector<CycNum> out;
    for (const auto& [text, off] : items(e)) out.push_back(scalar_at(e, text, off));
    return out;
  }

  std::vector<RepMatrices> reps(int N, int L) {
    std::vector<RepMatrices> out;
    for (int l = 1; l <= L; ++l) {
      const std::string key = "rep.site." + std::to_string(l);
      if (!has(key)) {
        out.push_back(RepMatrices::fundamental(N));
        continue;
      }
      const Entry& e = get(key);
      try {
        out.push_back(parse_rep(e.value, N));
      } catch (const std::exception& ex) {
        fail(e, 0, ex.what());
      }
    }
    for (const auto& [key, e] : entries_)
      if (key.rfind("rep.site.", 0) == 0 && !used_.count(key)) fail(e, 0, "no site for '" + key + "'");
    return out;
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_)
      if (!used_.count(key)) {
        Entry at = e;
        at.col = 1;
        fail(at, 0, "unknown key '" + key + "'");
      }
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

SparseOp parse_matrix(const std::string& text, int expect_dim) {
  std::vector<std::vector<CycNum>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<CycNum> r;
    std::stringstream cs(row);
    std::string cell;
    while (std::getline(cs, cell, ',')) r.push_back(ScalarParser(cell).parse());
    rows.push_back(std::move(r));
  }
  if (static_cast<int>(rows.size()) != expect_dim) throw std::invalid_argument("matrix must have " + std::to_string(expect_dim) + " rows");
  for (const auto& r : rows)
    if (static_cast<int>(r.size()) != expect_dim)
      throw std::invalid_argument("matrix rows must have " + std::to_string(expect_dim) + " entries");
  return SparseOp::from_dense(rows);
}

}  // namespace

CycNum parse_scalar(const std::string& text) {
  try {
    return ScalarParser(text).parse();
  } catch (const ScalarError& e) {
    throw ModelError("column " + std::to_string(e.at + 1) + ": " + e.msg);
  }
}

RepMatrices parse_rep(const std::string& text, int N) {
  const std::string t = trim(text);
  if (t == "fundamental") return RepMatrices::fundamental(N);
  if (t == "dual") return RepMatrices::dual(N);
  if (t == "spin1" || t == "sym2") {
    if (N != 2) throw std::invalid_argument("spin1 is a gl_2 representation");
    return RepMatrices::sym2_gl2();
  }
  if (t.rfind("inline", 0) == 0) {
    const std::size_t colon = t.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("inline representation needs 'inline d : ...'");
    const int d = std::stoi(trim(t.substr(6, colon - 6)));
    if (d < 1) throw std::invalid_argument("representation dimension must be positive");
    std::vector<SparseOp> rho;
    std::stringstream ms(t.substr(colon + 1));
    std::string mat;
    try {
      while (std::getline(ms, mat, '|')) rho.push_back(parse_matrix(mat, d));
    } catch (const ScalarError& e) {
      throw std::invalid_argument("inline matrix: " + e.msg);
    }
    if (static_cast<int>(rho.size()) != N * N)
      throw std::invalid_argument("inline representation needs N^2 = " + std::to_string(N * N) + " matrices");
    return RepMatrices(N, std::move(rho), "inline");
  }
  throw std::invalid_argument("unknown representation '" + t + "'");
}

ModelFile parse_model_text(const std::string& text, const std::string& origin, const std::string& base_dir) {
  ModelFile mf;
  mf.origin = origin;
  std::map<std::string, Entry> entries;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string body = raw.substr(0, raw.find('#'));
    if (trim(body).empty()) continue;
    const std::size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw ModelError(origin + ":" + std::to_string(line) + ":1: expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    std::size_t vstart = eq + 1;
    while (vstart < body.size() && std::isspace(static_cast<unsigned char>(body[vstart]))) ++vstart;
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ModelError(origin + ":" + std::to_string(line) + ":1: empty key");
    if (value.empty())
      throw ModelError(origin + ":" + std::to_string(line) + ":" + std::to_string(eq + 2) + ": empty value for '" + key + "'");
    if (entries.count(key))
      throw ModelError(origin + ":" + std::to_string(line) + ":1: duplicate key '" + key + "' (first on line " +
                       std::to_string(entries[key].line) + ")");
    entries[key] = Entry{value, line, vstart + 1};
    mf.entries.emplace_back(key, value);
  }

  Reader r(origin, entries);
  mf.format_version = static_cast<int>(r.integer("format_version"));
  if (mf.format_version != kModelFormatVersion) {
    const Entry& e = r.get("format_version");
    r.fail(e, 0, "unsupported format_version " + std::to_string(mf.format_version));
  }
  const Entry& ke = r.get("kind");
  if (ke.value == "inner-gaudin") {
    mf.kind = ModelKind::inner_gaudin;
  } else if (ke.value == "outer-gaudin") {
    mf.kind = ModelKind::outer_gaudin;
  } else if (ke.value == "dunkl") {
    mf.kind = ModelKind::dunkl;
  } else {
    r.fail(ke, 0, "kind must be inner-gaudin, outer-gaudin or dunkl");
  }

  auto check_L = [&](int L) {
    if (r.has("L") && r.integer("L") != L) {
      const Entry& e = r.get("L");
      r.fail(e, 0, "L disagrees with the number of z values (" + std::to_string(L) + ")");
    }
  };

  try {
    switch (mf.kind) {
      case ModelKind::inner_gaudin: {
        InnerModelSpec s;
        s.n = static_cast<int>(r.integer("n"));
        s.N = static_cast<int>(r.integer("N"));
        s.multiplicities = r.integers("multiplicities");
        s.z = r.rationals("z");
        check_L(s.L());
        if (s.N >= 1) s.reps = r.reps(s.N, s.L());
        r.reject_unused();
        s.validate();
        mf.spec = std::move(s);
        break;
      }
      case ModelKind::outer_gaudin: {
        OuterModelSpec s;
        s.N = static_cast<int>(r.integer("N"));
        s.eta = static_cast<int>(r.integer("eta"));
        if (r.has("signature")) {
          const auto pq = r.integers("signature");
          if (pq.size() != 2) r.fail(r.get("signature"), 0, "signature needs two entries p, q");
          s.p = pq[0];
          s.q = pq[1];
        }
        if (r.has("K")) {
          const Entry& e = r.get("K");
          try {
            s.K = parse_matrix(e.value, s.N);
          } catch (const ScalarError& err) {
            r.fail(e, 0, err.msg);
          } catch (const std::invalid_argument& err) {
            r.fail(e, 0, err.what());
          }
        }
        s.z = r.rationals("z");
        check_L(s.L());
        if (s.N >= 1) s.reps = r.reps(s.N, s.L());
        r.reject_unused();
        s.validate();
        mf.spec = std::move(s);
        break;
      }
      case ModelKind::dunkl: {
        DunklSpec s;
        s.n = static_cast<int>(r.integer("n"));
        s.L = static_cast<int>(r.integer("L"));
        s.N = static_cast<int>(r.integer_or("N", 1));
        if (r.has("multiplicities")) s.multiplicities = r.integers("multiplicities");
        if (r.has("lambda")) {
          const Entry& e = r.get("lambda");
          if (e.value != "symbolic") s.lambda = r.scalar_at(e, e.value, 0);
        }
        if (r.has("mu")) {
          const Entry& e = r.get("mu");
          if (e.value == "symbolic") {
            s.mu_mode = DunklSpec::MuMode::symbolic;
          } else if (e.value == "zero") {
            s.mu_mode = DunklSpec::MuMode::zero;
          } else {
            s.mu_mode = DunklSpec::MuMode::values;
            s.mu_values = r.scalars("mu");
          }
        }
        s.eps = static_cast<int>(r.integer_or("eps", 1));
        s.truncation = static_cast<int>(r.integer_or("truncation", -1));
        if (r.has("fixtures")) {
          const Entry& e = r.get("fixtures");
          std::filesystem::path p(e.value);
          if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
          mf.fixtures_dir = p.lexically_normal().string();
        }
        r.reject_unused();
        s.validate();
        mf.spec = std::move(s);
        break;
      }
    }
  } catch (const SpecError& e) {
    throw ModelError(origin + ": invalid model: " + e.what());
  } catch (const ModelError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ModelError(origin + ": invalid model: " + e.what());
  }
  return mf;
}

ModelFile parse_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ModelError(path + ": cannot open");
  std::stringstream ss;
  ss << f.rdbuf();
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  return parse_model_text(ss.str(), path, base.empty() ? "." : base.string());
}

}  // namespace halfloop
