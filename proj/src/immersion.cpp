#include "confgeo/immersion.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace confgeo {

AmbientSpec AmbientSpec::make(char space, int n, int s, double radius) {
  if (n < 1) throw DomainError("ambient: dimension must be positive");
  if (s < 0 || s > n) throw DomainError("ambient: index out of range");
  if (!(radius > 0)) throw DomainError("ambient: radius must be positive");
  AmbientSpec a;
  a.space_dim = n;
  a.space_index = s;
  a.radius = radius;
  switch (space) {
    case 'R':
      a.epsilon = 0;
      a.container = Signature(n, s);
      break;
    case 'S':
      a.epsilon = 1;
      a.container = Signature(n + 1, s);
      break;
    case 'H':
      a.epsilon = -1;
      a.container = Signature(n + 1, s + 1);
      break;
    default:
      throw DomainError("ambient: space must be R, S or H");
  }
  return a;
}

// ---------------------------------------------------------------------------
// DSL parser
// ---------------------------------------------------------------------------

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind;
  std::string text;
  double number = 0.0;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;
  Token cur;

  explicit Lexer(const std::string& s) : src(s) { advance(); }

  void bump(char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void advance() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) bump(src[pos]);
    cur.line = line;
    cur.col = col;
    if (pos >= src.size()) {
      cur.kind = Token::Kind::End;
      cur.text = "<end>";
      return;
    }
    const char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
        id += src[pos];
        bump(src[pos]);
      }
      cur.kind = Token::Kind::Ident;
      cur.text = id;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
      std::string num;
      while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
        { num += src[pos]; bump(src[pos]); }
      if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
        num += src[pos];
        bump(src[pos]);
        if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) { num += src[pos]; bump(src[pos]); }
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos])))
          { num += src[pos]; bump(src[pos]); }
      }
      cur.kind = Token::Kind::Number;
      cur.text = num;
      try {
        cur.number = std::stod(num);
      } catch (...) {
        throw SyntaxError("malformed number '" + num + "'", cur.line, cur.col);
      }
      return;
    }
    if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '>') {
      cur.kind = Token::Kind::Punct;
      cur.text = "->";
      bump('-');
      bump('>');
      return;
    }
    cur.kind = Token::Kind::Punct;
    cur.text = std::string(1, c);
    bump(c);
  }
};

struct Parser {
  Lexer lex;
  std::vector<std::string> params;

  explicit Parser(const std::string& s) : lex(s) {}

  [[noreturn]] void fail(const std::string& msg) {
    throw SyntaxError(msg + ", got '" + lex.cur.text + "'", lex.cur.line, lex.cur.col);
  }

  bool at_punct(const std::string& p) const {
    return lex.cur.kind == Token::Kind::Punct && lex.cur.text == p;
  }

  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "'");
    lex.advance();
  }

  std::string expect_ident() {
    if (lex.cur.kind != Token::Kind::Ident) fail("expected identifier");
    std::string s = lex.cur.text;
    lex.advance();
    return s;
  }

  double expect_number() {
    if (lex.cur.kind != Token::Kind::Number) fail("expected number");
    double v = lex.cur.number;
    lex.advance();
    return v;
  }

  double signed_number() {
    double sgn = 1.0;
    if (at_punct("-")) {
      lex.advance();
      sgn = -1.0;
    }
    return sgn * expect_number();
  }

  int param_index(const std::string& name) const {
    for (size_t i = 0; i < params.size(); ++i)
      if (params[i] == name) return static_cast<int>(i);
    return -1;
  }

  static bool func_from_name(const std::string& s, Func& out) {
    if (s == "sin") out = Func::Sin;
    else if (s == "cos") out = Func::Cos;
    else if (s == "sinh") out = Func::Sinh;
    else if (s == "cosh") out = Func::Cosh;
    else if (s == "exp") out = Func::Exp;
    else if (s == "sqrt") out = Func::Sqrt;
    else if (s == "log") out = Func::Log;
    else return false;
    return true;
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (at_punct("+") || at_punct("-")) {
      const bool add = at_punct("+");
      lex.advance();
      ExprPtr rhs = parse_term();
      e = add ? expr_add(e, rhs) : expr_sub(e, rhs);
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (at_punct("*") || at_punct("/")) {
      const bool mul = at_punct("*");
      lex.advance();
      ExprPtr rhs = parse_factor();
      e = mul ? expr_mul(e, rhs) : expr_div(e, rhs);
    }
    return e;
  }

  ExprPtr parse_factor() {
    ExprPtr e;
    if (at_punct("-")) {
      lex.advance();
      e = expr_neg(parse_factor());
      return e;  // unary minus binds the whole factor, including its powers
    }
    if (lex.cur.kind == Token::Kind::Number) {
      e = expr_num(lex.cur.number);
      lex.advance();
    } else if (at_punct("(")) {
      lex.advance();
      e = parse_expr();
      expect_punct(")");
    } else if (lex.cur.kind == Token::Kind::Ident) {
      const Token id = lex.cur;
      lex.advance();
      if (at_punct("(")) {
        Func fn;
        if (!func_from_name(id.text, fn))
          throw UnknownFunction("unknown function '" + id.text + "' (line " +
                                std::to_string(id.line) + ", col " + std::to_string(id.col) + ")");
        lex.advance();
        ExprPtr arg = parse_expr();
        if (at_punct(","))
          throw ArityError("function '" + id.text + "' takes exactly one argument");
        expect_punct(")");
        e = expr_call(fn, arg);
      } else {
        const int idx = param_index(id.text);
        if (idx < 0)
          throw SyntaxError("unknown identifier '" + id.text + "'", id.line, id.col);
        e = expr_param(idx);
      }
    } else {
      fail("expected expression");
    }
    while (at_punct("^")) {
      lex.advance();
      double sgn = 1.0;
      if (at_punct("-")) {
        lex.advance();
        sgn = -1.0;
      }
      e = expr_pow(e, sgn * expect_number());
    }
    return e;
  }

  ImmersionSpec parse_spec() {
    if (lex.cur.kind != Token::Kind::Ident || lex.cur.text != "map") fail("expected 'map'");
    lex.advance();
    expect_punct("(");
    params.push_back(expect_ident());
    while (at_punct(",")) {
      lex.advance();
      params.push_back(expect_ident());
    }
    expect_punct(")");
    expect_punct("->");
    expect_punct("(");
    std::vector<ExprPtr> comps;
    comps.push_back(parse_expr());
    while (at_punct(",")) {
      lex.advance();
      comps.push_back(parse_expr());
    }
    expect_punct(")");
    if (lex.cur.kind != Token::Kind::Ident || lex.cur.text != "ambient") fail("expected 'ambient'");
    lex.advance();
    const std::string space = expect_ident();
    if (space.size() != 1 || (space != "R" && space != "S" && space != "H"))
      fail("expected ambient space R, S or H");
    const int n = static_cast<int>(expect_number());
    const int s = static_cast<int>(expect_number());
    double radius = 1.0;
    std::vector<std::array<double, 2>> domain;
    while (lex.cur.kind == Token::Kind::Ident) {
      if (lex.cur.text == "radius") {
        lex.advance();
        radius = expect_number();
      } else if (lex.cur.text == "domain") {
        lex.advance();
        domain.push_back(parse_interval());
        while (at_punct(",")) {
          lex.advance();
          domain.push_back(parse_interval());
        }
      } else {
        fail("unexpected trailing clause");
      }
    }
    if (lex.cur.kind != Token::Kind::End) fail("unexpected trailing input");

    ImmersionSpec spec;
    spec.m = static_cast<int>(params.size());
    spec.param_names = params;
    spec.components = std::move(comps);
    spec.ambient = AmbientSpec::make(space[0], n, s, radius);
    if (static_cast<int>(spec.components.size()) != spec.ambient.container.dim)
      throw DomainError("spec: component count " + std::to_string(spec.components.size()) +
                        " does not match container dimension " +
                        std::to_string(spec.ambient.container.dim));
    if (spec.m < 1 || spec.m > Jet::kMaxVars)
      throw DomainError("spec: between 1 and 4 parameters supported");
    if (domain.empty())
      domain.assign(spec.m, {-1.0, 1.0});
    if (static_cast<int>(domain.size()) != spec.m)
      throw DomainError("spec: domain interval count does not match parameter count");
    for (auto& iv : domain)
      if (!(iv[0] < iv[1])) throw DomainError("spec: empty domain interval");
    spec.domain = std::move(domain);
    return spec;
  }

  std::array<double, 2> parse_interval() {
    expect_punct("[");
    const double a = signed_number();
    expect_punct(",");
    const double b = signed_number();
    expect_punct("]");
    return {a, b};
  }
};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ImmersionSpec parse(const std::string& text) {
  Parser p(text);
  return p.parse_spec();
}

std::string print(const ImmersionSpec& spec) {
  std::ostringstream os;
  os << "map(";
  for (int i = 0; i < spec.m; ++i) os << (i ? ", " : "") << spec.param_names[i];
  os << ") -> (";
  for (size_t i = 0; i < spec.components.size(); ++i)
    os << (i ? ", " : "") << print_expr(spec.components[i], spec.param_names);
  os << ") ambient " << (spec.ambient.epsilon == 0 ? 'R' : spec.ambient.epsilon > 0 ? 'S' : 'H')
     << " " << spec.ambient.space_dim << " " << spec.ambient.space_index;
  if (spec.ambient.radius != 1.0) os << " radius " << fmt17(spec.ambient.radius);
  bool default_domain = true;
  for (const auto& iv : spec.domain)
    if (iv[0] != -1.0 || iv[1] != 1.0) default_domain = false;
  if (!default_domain) {
    os << " domain ";
    for (size_t i = 0; i < spec.domain.size(); ++i)
      os << (i ? ", " : "") << "[" << fmt17(spec.domain[i][0]) << ", " << fmt17(spec.domain[i][1]) << "]";
  }
  return os.str();
}

std::vector<Jet> evaluate(const ImmersionSpec& spec, const Eigen::VectorXd& point) {
  if (point.size() != spec.m) throw DimensionMismatch("evaluate: point dimension mismatch");
  for (int i = 0; i < spec.m; ++i)
    if (point[i] < spec.domain[i][0] || point[i] > spec.domain[i][1])
      throw DomainError("evaluate: point outside declared domain (parameter " +
                        spec.param_names[i] + ")");
  std::vector<Jet> vars;
  vars.reserve(spec.m);
  for (int i = 0; i < spec.m; ++i) vars.push_back(Jet::variable(i, point[i], spec.m));
  std::vector<Jet> u;
  u.reserve(spec.components.size());
  for (const auto& c : spec.components) u.push_back(eval_jet(c, vars));
  if (spec.linear_map.size() > 0) {
    const Eigen::MatrixXd& L = spec.linear_map;
    if (L.rows() != L.cols() || L.rows() != static_cast<int>(u.size()))
      throw DimensionMismatch("evaluate: linear map size mismatch");
    std::vector<Jet> v(u.size(), Jet::constant(0.0, spec.m));
    for (int i = 0; i < L.rows(); ++i)
      for (int j = 0; j < L.cols(); ++j)
        if (L(i, j) != 0.0) v[i] += L(i, j) * u[j];
    u = std::move(v);
  }
  if (spec.ambient.epsilon != 0) {
    double q = 0.0;
    for (int a = 0; a < spec.ambient.container.dim; ++a)
      q += spec.ambient.container.sign(a) * u[a].value() * u[a].value();
    const double target = spec.ambient.epsilon * spec.ambient.radius * spec.ambient.radius;
    if (std::abs(q - target) > 1e-8)
      throw ConstraintViolation("evaluate: map leaves the space form, <u,u> = " +
                                std::to_string(q) + " expected " + std::to_string(target));
  }
  return u;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

double get_param(const std::map<std::string, double>& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

int get_int_param(const std::map<std::string, double>& params, const std::string& key, int dflt) {
  const double v = get_param(params, key, dflt);
  if (std::abs(v - std::round(v)) > 1e-9) throw InvalidParam("parameter " + key + " must be an integer");
  return static_cast<int>(std::round(v));
}

// k-sphere of radius r, equator-centered coordinates (nondegenerate near 0).
std::vector<std::string> sphere_comps(double r, int k, const std::vector<std::string>& ps) {
  const std::string R = fmt17(r);
  if (k == 1) return {R + "*cos(" + ps[0] + ")", R + "*sin(" + ps[0] + ")"};
  if (k == 2)
    return {R + "*cos(" + ps[0] + ")*cos(" + ps[1] + ")",
            R + "*cos(" + ps[0] + ")*sin(" + ps[1] + ")", R + "*sin(" + ps[0] + ")"};
  throw InvalidParam("sphere factor supports k in {1,2}");
}

// k-dimensional hyperbolic factor of radius r in R^{k+1}_1, first coordinate on
// the negative axis; coordinates chosen so the induced metric never degenerates.
std::vector<std::string> hyperbolic_comps(double r, int k, const std::vector<std::string>& ps) {
  const std::string R = fmt17(r);
  if (k == 1) return {R + "*cosh(" + ps[0] + ")", R + "*sinh(" + ps[0] + ")"};
  if (k == 2)
    return {R + "*cosh(" + ps[0] + ")*cosh(" + ps[1] + ")", R + "*sinh(" + ps[0] + ")",
            R + "*cosh(" + ps[0] + ")*sinh(" + ps[1] + ")"};
  throw InvalidParam("hyperbolic factor supports k in {1,2}");
}

std::vector<std::string> param_block(int count, int offset) {
  std::vector<std::string> ps;
  for (int i = 0; i < count; ++i) ps.push_back("u" + std::to_string(offset + i + 1));
  return ps;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? ", " : "") + parts[i];
  return out;
}

ImmersionSpec finish(const std::string& name, const std::string& dsl, int expected_index,
                     const std::array<double, 2>* dom = nullptr) {
  ImmersionSpec spec = parse(dsl);
  spec.name = name;
  spec.expected_index = expected_index;
  if (dom)
    for (auto& iv : spec.domain) iv = *dom;
  return spec;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"sl-H1xH1", "H^1(r) x H^1(sqrt(1-r^2)) in H^3_1 (space-like)", "0 < r < 1", {{"r", 0.6}}},
      {"sl-H1xS1", "H^1(r) x S^1(sqrt(1+r^2)) in S^3_1 (space-like)", "r > 0", {{"r", 1.0}}},
      {"sl-H1xR1", "H^1(r) x R^1 in R^3_1 (space-like)", "r > 0", {{"r", 1.0}}},
      {"tl-H11xH1", "H^1_1(r) x S^1(sqrt(r^2-1)) in H^3_1 (time-like)", "r > 1", {{"r", 1.5}}},
      {"tl-S11xH1", "S^1_1(r) x H^1(sqrt(1+r^2)) in H^3_1 (time-like)", "r > 0", {{"r", 1.0}}},
      {"tl-S11xS1", "S^1_1(r) x S^1(sqrt(1-r^2)) in S^3_1 (time-like)", "0 < r < 1", {{"r", 0.6}}},
      {"tl-R11xS1", "R^1_1 x S^1(r) in R^3_1 (time-like)", "r > 0", {{"r", 1.0}}},
      {"tl-S11xR1", "S^1_1(r) x R^1 in R^3_1 (time-like)", "r > 0", {{"r", 1.0}}},
      {"cmc-cylinder", "S^k(r) x R^(m-k) in R^(m+1) (CMC)", "r > 0, 2 <= m <= 3, k in {1,2}",
       {{"r", 1.0}, {"m", 2}, {"k", 1}}},
      {"cmc-sphere-product", "S^k(r) x S^(m-k)(sqrt(1-r^2)) in S^(m+1) (CMC)",
       "0 < r < 1, 2 <= m <= 3, k in {1,2}", {{"r", 0.5}, {"m", 2}, {"k", 1}}},
      {"cmc-h-product", "S^k(r) x H^(m-k)(sqrt(1+r^2)) in H^(m+1) (CMC)",
       "r > 0, 2 <= m <= 3, k in {1,2}", {{"r", 1.0}, {"m", 2}, {"k", 1}}},
  };
  return entries;
}

ImmersionSpec catalog(const std::string& name, const std::map<std::string, double>& params) {
  const CatalogEntry* entry = nullptr;
  for (const auto& e : catalog_entries())
    if (e.name == name) entry = &e;
  if (!entry) throw UnknownSurface("unknown catalog surface '" + name + "'");
  const double r = get_param(params, "r", get_param(entry->defaults, "r", 1.0));
  if (!(r > 0)) throw InvalidParam(name + ": r must be positive");
  const std::string R = fmt17(r);

  if (name == "sl-H1xH1") {
    if (!(r < 1)) throw InvalidParam("sl-H1xH1: requires 0 < r < 1");
    const double p = std::sqrt(1 - r * r);
    const std::string P = fmt17(p);
    return finish(name,
                  "map(u,v) -> (" + R + "*cosh(" + R + "*u), " + P + "*cosh(" + P + "*v), " + R +
                      "*sinh(" + R + "*u), " + P + "*sinh(" + P + "*v)) ambient H 3 1",
                  0);
  }
  if (name == "sl-H1xS1") {
    const double p = std::sqrt(1 + r * r);
    const std::string P = fmt17(p);
    return finish(name,
                  "map(u,v) -> (" + R + "*cosh(" + R + "*u), " + R + "*sinh(" + R + "*u), " + P +
                      "*cos(" + P + "*v), " + P + "*sin(" + P + "*v)) ambient S 3 1",
                  0);
  }
  if (name == "sl-H1xR1") {
    return finish(name, "map(u,v) -> (" + R + "*cosh(u), " + R + "*sinh(u), v) ambient R 3 1", 0);
  }
  if (name == "tl-H11xH1") {
    if (!(r > 1)) throw InvalidParam("tl-H11xH1: requires r > 1");
    const double p = std::sqrt(r * r - 1);
    const std::string P = fmt17(p);
    const std::array<double, 2> dom{-0.6, 0.6};
    return finish(name,
                  "map(u,v) -> (" + R + "*cos(" + R + "*u), " + R + "*sin(" + R + "*u), " + P +
                      "*cos(" + P + "*v), " + P + "*sin(" + P + "*v)) ambient H 3 1",
                  1, &dom);
  }
  if (name == "tl-S11xH1") {
    const double p = std::sqrt(1 + r * r);
    const std::string P = fmt17(p);
    return finish(name,
                  "map(u,v) -> (" + R + "*sinh(" + R + "*u), " + P + "*cosh(" + P + "*v), " + R +
                      "*cosh(" + R + "*u), " + P + "*sinh(" + P + "*v)) ambient H 3 1",
                  1);
  }
  if (name == "tl-S11xS1") {
    if (!(r < 1)) throw InvalidParam("tl-S11xS1: requires 0 < r < 1");
    const double p = std::sqrt(1 - r * r);
    const std::string P = fmt17(p);
    return finish(name,
                  "map(u,v) -> (" + R + "*sinh(" + R + "*u), " + R + "*cosh(" + R + "*u), " + P +
                      "*cos(" + P + "*v), " + P + "*sin(" + P + "*v)) ambient S 3 1",
                  1);
  }
  if (name == "tl-R11xS1") {
    return finish(name, "map(u,v) -> (u, " + R + "*cos(v), " + R + "*sin(v)) ambient R 3 1", 1);
  }
  if (name == "tl-S11xR1") {
    return finish(name, "map(u,v) -> (" + R + "*sinh(u), " + R + "*cosh(u), v) ambient R 3 1", 1);
  }

  const int m = get_int_param(params, "m", get_int_param(entry->defaults, "m", 2));
  const int k = get_int_param(params, "k", get_int_param(entry->defaults, "k", 1));
  if (m < 2 || m > 3) throw InvalidParam(name + ": m must be 2 or 3");
  if (k < 1 || k > 2 || k >= m)
    throw InvalidParam(name + ": k must be in {1,2} and leave a nonempty second factor");

  const auto ps1 = param_block(k, 0);
  const auto ps2 = param_block(m - k, k);
  std::vector<std::string> all_params = ps1;
  all_params.insert(all_params.end(), ps2.begin(), ps2.end());

  if (name == "cmc-cylinder") {
    std::vector<std::string> comps = sphere_comps(r, k, ps1);
    comps.insert(comps.end(), ps2.begin(), ps2.end());
    return finish(name,
                  "map(" + join(all_params) + ") -> (" + join(comps) + ") ambient R " +
                      std::to_string(m + 1) + " 0",
                  0);
  }
  if (name == "cmc-sphere-product") {
    if (!(r < 1)) throw InvalidParam("cmc-sphere-product: requires 0 < r < 1");
    const double p = std::sqrt(1 - r * r);
    std::vector<std::string> comps = sphere_comps(r, k, ps1);
    const auto second = sphere_comps(p, m - k, ps2);
    comps.insert(comps.end(), second.begin(), second.end());
    return finish(name,
                  "map(" + join(all_params) + ") -> (" + join(comps) + ") ambient S " +
                      std::to_string(m + 1) + " 0",
                  0);
  }
  if (name == "cmc-h-product") {
    const double p = std::sqrt(1 + r * r);
    // Hyperbolic factor occupies the leading container axes (negative axis first).
    std::vector<std::string> comps = hyperbolic_comps(p, m - k, ps2);
    const auto second = sphere_comps(r, k, ps1);
    comps.insert(comps.end(), second.begin(), second.end());
    return finish(name,
                  "map(" + join(all_params) + ") -> (" + join(comps) + ") ambient H " +
                      std::to_string(m + 1) + " 0",
                  0);
  }
  throw UnknownSurface("unknown catalog surface '" + name + "'");
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

ImmersionSpec apply_isometry(const ImmersionSpec& spec, const Eigen::MatrixXd& T) {
  if (T.rows() != spec.ambient.container.dim || T.cols() != T.rows())
    throw DimensionMismatch("apply_isometry: matrix size mismatch");
  ImmersionSpec out = spec;
  out.linear_map = spec.linear_map.size() > 0 ? Eigen::MatrixXd(T * spec.linear_map) : T;
  out.name = spec.name.empty() ? "isometry-image" : spec.name + "+isometry";
  return out;
}

Signature lift_signature(const AmbientSpec& amb) {
  return Signature(amb.space_dim + 2, amb.space_index + 1);
}

ImmersionSpec conformal_image(const ImmersionSpec& spec, const Eigen::MatrixXd& T) {
  const int n = spec.ambient.space_dim;
  const int liftN = n + 2;
  if (T.rows() != liftN || T.cols() != liftN)
    throw DimensionMismatch("conformal_image: matrix must act on the lift space");

  // Effective component expressions (fold a pending linear map into the ASTs).
  std::vector<ExprPtr> comps = spec.components;
  if (spec.linear_map.size() > 0) {
    std::vector<ExprPtr> mixed(comps.size());
    for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
      ExprPtr acc;
      for (int j = 0; j < static_cast<int>(comps.size()); ++j) {
        if (spec.linear_map(i, j) == 0.0) continue;
        ExprPtr term = expr_mul(expr_num(spec.linear_map(i, j)), comps[j]);
        acc = acc ? expr_add(acc, term) : term;
      }
      mixed[i] = acc ? acc : expr_num(0.0);
    }
    comps = std::move(mixed);
  }

  // Light-cone lift components y0[0..liftN-1] as expression trees.
  std::vector<ExprPtr> y0(liftN);
  if (spec.ambient.epsilon == 0) {
    ExprPtr q;
    for (int a = 0; a < n; ++a) {
      ExprPtr sq = expr_mul(comps[a], comps[a]);
      if (spec.ambient.container.sign(a) < 0) sq = expr_neg(sq);
      q = q ? expr_add(q, sq) : sq;
    }
    y0[0] = expr_mul(expr_num(0.5), expr_add(q, expr_num(1.0)));
    for (int a = 0; a < n; ++a) y0[1 + a] = comps[a];
    y0[liftN - 1] = expr_mul(expr_num(0.5), expr_sub(q, expr_num(1.0)));
  } else if (spec.ambient.epsilon > 0) {
    y0[0] = expr_num(spec.ambient.radius);
    for (int a = 0; a < n + 1; ++a) y0[1 + a] = comps[a];
  } else {
    for (int a = 0; a < n + 1; ++a) y0[a] = comps[a];
    y0[liftN - 1] = expr_num(spec.ambient.radius);
  }

  // Apply T, then chart back through the flat space form: u_i = Z_{1+i} / (Z_0 - Z_last).
  std::vector<ExprPtr> Z(liftN);
  for (int i = 0; i < liftN; ++i) {
    ExprPtr acc;
    for (int j = 0; j < liftN; ++j) {
      if (T(i, j) == 0.0) continue;
      ExprPtr term = expr_mul(expr_num(T(i, j)), y0[j]);
      acc = acc ? expr_add(acc, term) : term;
    }
    Z[i] = acc ? acc : expr_num(0.0);
  }
  ExprPtr sigma = expr_sub(Z[0], Z[liftN - 1]);

  ImmersionSpec out;
  out.m = spec.m;
  out.param_names = spec.param_names;
  out.ambient = AmbientSpec::make('R', n, spec.ambient.space_index, 1.0);
  out.domain = spec.domain;
  out.expected_index = spec.expected_index;
  out.name = spec.name.empty() ? "conformal-image" : spec.name + "+conformal";
  out.components.resize(n);
  for (int i = 0; i < n; ++i) out.components[i] = expr_div(Z[1 + i], sigma);
  return out;
}

ImmersionSpec reparametrize_affine(const ImmersionSpec& spec, const Eigen::VectorXd& scale,
                                   const Eigen::VectorXd& offset) {
  if (scale.size() != spec.m || offset.size() != spec.m)
    throw DimensionMismatch("reparametrize_affine: size mismatch");
  std::vector<double> sc(scale.data(), scale.data() + spec.m);
  std::vector<double> of(offset.data(), offset.data() + spec.m);
  ImmersionSpec out = spec;
  for (auto& c : out.components) c = expr_affine_params(c, sc, of);
  for (int i = 0; i < spec.m; ++i) {
    if (scale[i] == 0.0) throw DomainError("reparametrize_affine: zero scale");
    double a = (spec.domain[i][0] - offset[i]) / scale[i];
    double b = (spec.domain[i][1] - offset[i]) / scale[i];
    if (a > b) std::swap(a, b);
    out.domain[i] = {a, b};
  }
  out.name = spec.name.empty() ? "reparametrized" : spec.name + "+reparam";
  return out;
}

std::vector<Eigen::VectorXd> interior_grid(const ImmersionSpec& spec, int target) {
  const int m = spec.m;
  int per_axis = 1;
  while (std::pow(per_axis, m) < target) ++per_axis;
  std::vector<Eigen::VectorXd> pts;
  const int total = static_cast<int>(std::pow(per_axis, m));
  for (int idx = 0; idx < total; ++idx) {
    Eigen::VectorXd p(m);
    int rem = idx;
    for (int i = 0; i < m; ++i) {
      const int gi = rem % per_axis;
      rem /= per_axis;
      const double lo = spec.domain[i][0], hi = spec.domain[i][1];
      const double margin = 0.1 * (hi - lo);
      const double a = lo + margin, b = hi - margin;
      p[i] = per_axis == 1 ? 0.5 * (a + b) : a + (b - a) * gi / (per_axis - 1.0);
    }
    pts.push_back(p);
  }
  return pts;
}

Eigen::MatrixXd random_signature_orthogonal(const Signature& sig, std::mt19937_64& rng,
                                            double magnitude) {
  const int n = sig.dim;
  std::uniform_real_distribution<double> dist(-magnitude, magnitude);
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      W(i, j) = dist(rng);
      W(j, i) = -W(i, j);
    }
  Eigen::MatrixXd X = sig.signs().asDiagonal() * W;  // X^T J + J X = 0
  // exp(X) by scaling and squaring with a truncated series.
  int s = 0;
  double norm = X.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2;
    ++s;
  }
  Eigen::MatrixXd A = X / std::pow(2.0, s);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd acc = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * A / k;
    acc += term;
  }
  for (int i = 0; i < s; ++i) acc = acc * acc;
  return acc;
}

}  // namespace confgeo
