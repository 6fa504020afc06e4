#include "cml/poly_io.hpp"

#include <cctype>
#include <fstream>

#include "cml/error.hpp"

namespace cml {
namespace {

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> allowed,
                         std::string_view what) {
  if (!j.is_object()) throw InputError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw InputError("unknown key '" + key + "' in " + std::string(what));
  }
}

std::size_t get_count(const json& j, const char* key, std::string_view what) {
  if (!j.contains(key)) throw InputError(std::string(what) + " lacks key '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw InputError(std::string(what) + " key '" + key + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

BigInt parse_integer(const std::string& s) {
  BigInt v;
  std::string_view body(s);
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) body.remove_prefix(1);
  if (body.empty() || !std::all_of(body.begin(), body.end(),
                                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw InputError("'" + s + "' is not a decimal integer");
  }
  std::string clean = s[0] == '+' ? s.substr(1) : s;
  if (v.set_str(clean, 10) != 0) throw InputError("'" + s + "' is not a decimal integer");
  return v;
}

class ExprParser {
 public:
  ExprParser(std::string_view text, const std::vector<std::string>& names)
      : text_(text), names_(names) {}

  IntPolynomial parse() {
    IntPolynomial p = sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected character");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError(msg + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) +
                     "'");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  IntPolynomial sum() {
    IntPolynomial acc(names_.size());
    bool negate = false;
    skip_ws();
    if (eat('-')) {
      negate = true;
    } else {
      eat('+');
    }
    acc = negate ? -product() : product();
    for (;;) {
      if (eat('+')) {
        acc = acc + product();
      } else if (eat('-')) {
        acc = acc - product();
      } else {
        return acc;
      }
    }
  }

  IntPolynomial product() {
    IntPolynomial acc = power();
    while (eat('*')) acc = acc * power();
    return acc;
  }

  IntPolynomial power() {
    IntPolynomial base = atom();
    if (eat('^')) {
      skip_ws();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      const unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
      if (e > 1000) fail("exponent too large");
      base = base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  IntPolynomial atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      IntPolynomial inner = sum();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos_;
      return -power();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return IntPolynomial::constant(names_.size(),
                                     BigInt(std::string(text_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_' || text_[pos_] == '\'')) {
        ++pos_;
      }
      const std::string name(text_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) return IntPolynomial::variable(names_.size(), i);
      }
      pos_ = start;
      fail("unknown variable '" + name + "'");
    }
    fail("unexpected character");
  }

  std::string_view text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

IntPolynomial poly_from_json(const json& j) {
  reject_unknown_keys(j, {"n", "terms"}, "polynomial");
  const std::size_t n = get_count(j, "n", "polynomial");
  if (!j.contains("terms") || !j.at("terms").is_array()) {
    throw InputError("polynomial needs a 'terms' array");
  }
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) {
    reject_unknown_keys(t, {"c", "e"}, "term");
    if (!t.contains("c") || !t.contains("e")) throw InputError("term needs 'c' and 'e'");
    const auto& c = t.at("c");
    BigInt coeff;
    if (c.is_string()) {
      coeff = parse_integer(c.get<std::string>());
    } else if (c.is_number_integer()) {
      coeff = parse_integer(c.dump());
    } else {
      throw InputError("term coefficient must be a decimal string or integer");
    }
    const auto& e = t.at("e");
    if (!e.is_array() || e.size() != n) {
      throw InputError("exponent vector must have length " + std::to_string(n));
    }
    Exponents exps;
    for (const auto& x : e) {
      if (!x.is_number_integer() || x.get<long long>() < 0 || x.get<long long>() > 100000) {
        throw InputError("exponents must be non-negative integers");
      }
      exps.push_back(x.get<std::uint32_t>());
    }
    terms.push_back(Term{std::move(exps), std::move(coeff)});
  }
  return IntPolynomial::from_terms(n, std::move(terms));
}

json poly_to_json(const IntPolynomial& p) {
  json terms = json::array();
  for (const auto& t : p.terms()) terms.push_back({{"c", t.coeff.get_str()}, {"e", t.exps}});
  return {{"n", p.num_vars()}, {"terms", terms}};
}

BihomSystem system_from_json(const json& j) {
  reject_unknown_keys(j, {"n1", "n2", "R", "polys"}, "system");
  const std::size_t n1 = get_count(j, "n1", "system");
  const std::size_t n2 = get_count(j, "n2", "system");
  if (!j.contains("polys") || !j.at("polys").is_array()) {
    throw InputError("system needs a 'polys' array");
  }
  std::vector<IntPolynomial> polys;
  for (const auto& p : j.at("polys")) {
    polys.push_back(poly_from_json(p));
    if (polys.back().num_vars() != n1 + n2) {
      throw InputError("system polynomial has n=" + std::to_string(polys.back().num_vars()) +
                       ", expected n1+n2=" + std::to_string(n1 + n2));
    }
  }
  if (j.contains("R") && get_count(j, "R", "system") != polys.size()) {
    throw InputError("system 'R' does not match the number of polys");
  }
  return BihomSystem(n1, n2, std::move(polys));
}

json system_to_json(const BihomSystem& sys) {
  json polys = json::array();
  for (const auto& p : sys.polys()) polys.push_back(poly_to_json(p));
  return {{"n1", sys.n1()}, {"n2", sys.n2()}, {"R", sys.R()}, {"polys", polys}};
}

json rational_to_json(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

Rational rational_from_json(const json& j) {
  reject_unknown_keys(j, {"num", "den"}, "rational");
  Rational q(parse_integer(j.at("num").get<std::string>()),
             parse_integer(j.at("den").get<std::string>()));
  if (q.get_den() == 0) throw InputError("rational with zero denominator");
  q.canonicalize();
  return q;
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

IntPolynomial parse_poly(std::string_view expr, const std::vector<std::string>& names) {
  return ExprParser(expr, names).parse();
}

std::vector<std::string> block_names(std::size_t n1, std::size_t n2) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n1; ++i) names.push_back("x" + std::to_string(i + 1));
  for (std::size_t i = 0; i < n2; ++i) names.push_back("y" + std::to_string(i + 1));
  return names;
}

std::vector<std::string> plain_names(std::size_t n) { return block_names(n, 0); }

}  // namespace cml
