#include <cctype>
#include <numeric>
#include <sstream>

#include "bianchi/errors.hpp"
#include "bianchi/ring.hpp"

namespace bianchi {

namespace {

struct Rat {
  int64_t p = 0, q = 1;
  Rat() = default;
  Rat(int64_t p_, int64_t q_ = 1) : p(p_), q(q_) { norm(); }
  void norm() {
    if (q == 0) throw Error(ErrorKind::ParseError, "division by zero");
    if (q < 0) {
      p = -p;
      q = -q;
    }
    int64_t g = std::gcd(p < 0 ? -p : p, q);
    if (g > 1) {
      p /= g;
      q /= g;
    }
  }
};
Rat operator+(Rat x, Rat y) { return Rat(x.p * y.q + y.p * x.q, x.q * y.q); }
Rat operator-(Rat x) { return Rat(-x.p, x.q); }
Rat operator*(Rat x, Rat y) { return Rat(x.p * y.p, x.q * y.q); }
Rat operator/(Rat x, Rat y) {
  if (y.p == 0) throw Error(ErrorKind::ParseError, "division by zero");
  return Rat(x.p * y.q, x.q * y.p);
}

// re + im * sqrt(-d)
struct Val {
  Rat re, im;
};

class Parser {
 public:
  Parser(int64_t d, const std::string& s) : d_(d), s_(s) {}

  Val parse_all() {
    Val v = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return v;
  }

 private:
  int64_t d_;
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::ParseError, what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Val mul(const Val& x, const Val& y) {
    return {x.re * y.re + -(Rat(d_) * x.im * y.im), x.re * y.im + x.im * y.re};
  }
  Val div(const Val& x, const Val& y) {
    Rat n = y.re * y.re + Rat(d_) * y.im * y.im;
    Val c{y.re, -y.im};
    Val t = mul(x, c);
    return {t.re / n, t.im / n};
  }

  Val expr() {
    Val v = term();
    for (;;) {
      if (eat('+')) {
        Val t = term();
        v = {v.re + t.re, v.im + t.im};
      } else if (eat('-')) {
        Val t = term();
        v = {v.re + -t.re, v.im + -t.im};
      } else {
        return v;
      }
    }
  }
  Val term() {
    Val v = unary();
    for (;;) {
      if (eat('*')) v = mul(v, unary());
      else if (eat('/')) v = div(v, unary());
      else return v;
    }
  }
  Val unary() {
    if (eat('-')) {
      Val v = unary();
      return {-v.re, -v.im};
    }
    if (eat('+')) return unary();
    return power();
  }
  Val power() {
    Val v = atom();
    if (eat('^')) {
      skip();
      size_t st = pos_;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
      if (st == pos_) fail("expected exponent");
      int e = std::stoi(s_.substr(st, pos_ - st));
      Val r{Rat(1), Rat(0)};
      for (int i = 0; i < e; ++i) r = mul(r, v);
      return r;
    }
    return v;
  }
  Val atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Val v = expr();
      if (!eat(')')) fail("expected ')'");
      return v;
    }
    if (std::isdigit((unsigned char)c)) {
      size_t st = pos_;
      while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
      return {Rat(std::stoll(s_.substr(st, pos_ - st))), Rat(0)};
    }
    if (s_.compare(pos_, 5, "sqrt(") == 0) {
      pos_ += 5;
      Val inner = expr();
      if (!eat(')')) fail("expected ')'");
      if (inner.im.p != 0 || inner.re.q != 1 || inner.re.p != -d_) fail("only sqrt(-d) is supported");
      return {Rat(0), Rat(1)};
    }
    ++pos_;
    if (c == 's') return {Rat(0), Rat(1)};
    if (c == 'i' && d_ == 1) return {Rat(0), Rat(1)};
    if (c == 'w') {
      if (d_ % 4 == 3) return {Rat(1, 2), Rat(1, 2)};
      return {Rat(0), Rat(1)};
    }
    --pos_;
    fail("unexpected character");
  }
};

QuadInt to_quad(int64_t d, const Val& v, const std::string& text) {
  auto bad = [&]() -> QuadInt {
    throw Error(ErrorKind::ParseError, "'" + text + "' is not an integer of the ring");
  };
  if (d % 4 == 3) {
    // re + im s = (re - im) + 2 im w
    Rat a = v.re + -v.im, b = Rat(2) * v.im;
    if (a.q != 1 || b.q != 1) return bad();
    return QuadInt(d, a.p, b.p);
  }
  if (v.re.q != 1 || v.im.q != 1) return bad();
  return QuadInt(d, v.re.p, v.im.p);
}

std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

QuadInt parse_quad_int(int64_t d, const std::string& text) {
  Parser p(d, text);
  return to_quad(d, p.parse_all(), text);
}

std::vector<QuadInt> parse_ideal_literal(int64_t d, const std::string& text) {
  std::string t = trim(text);
  size_t g = t.find("gens=");
  if (g != std::string::npos) t = trim(t.substr(g + 5));
  if (!t.empty() && (t.front() == '[' || t.front() == '<')) {
    char close = t.front() == '[' ? ']' : '>';
    if (t.back() != close) throw Error(ErrorKind::ParseError, "unbalanced brackets in '" + text + "'");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<QuadInt> out;
  for (const std::string& part : split_top(t)) {
    std::string p = trim(part);
    if (p.empty()) throw Error(ErrorKind::ParseError, "empty generator in '" + text + "'");
    out.push_back(parse_quad_int(d, p));
  }
  return out;
}

std::string format_sqrt(const QuadInt& x) {
  const int64_t d = x.d;
  std::string rad = d == 1 ? "i" : "sqrt(-" + std::to_string(d) + ")";
  auto lin = [&](int64_t A, int64_t B) {
    std::ostringstream os;
    if (B == 0) {
      os << A;
      return os.str();
    }
    if (A != 0) os << A << (B > 0 ? "+" : "-");
    else if (B < 0) os << "-";
    int64_t ab = B < 0 ? -B : B;
    if (ab != 1) os << ab << "*";
    os << rad;
    return os.str();
  };
  if (d % 4 == 3) {
    // a + b(1+s)/2 = ((2a+b) + b s)/2
    int64_t A = 2 * x.a + x.b, B = x.b;
    if (B % 2 == 0) return lin(A / 2, B / 2);
    return "(" + lin(A, B) + ")/2";
  }
  return lin(x.a, x.b);
}

std::string format_ideal(const QuadIdeal& I) {
  std::string s = "<";
  auto gens = ideal_generators(I);
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i) s += ",";
    s += format_sqrt(gens[i]);
  }
  return s + ">";
}

}  // namespace bianchi
