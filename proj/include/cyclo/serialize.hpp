#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "cyclo/series.hpp"
#include "cyclo/word.hpp"

namespace cyclo {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string format_coeff(const Rat& q) {
  std::ostringstream os;
  os << numerator(q);
  if (denominator(q) != 1) os << "/" << denominator(q);
  return os.str();
}

inline std::string format_real_full(const Real& x) {
  // digits = 0 requests enough digits for an exact round trip
  return x.str(0, std::ios_base::scientific);
}

inline std::string format_coeff(const BC& z) {
  std::string s = format_real_full(z.re);
  s += (z.im.sign() < 0) ? '-' : '+';
  s += format_real_full(z.im.sign() < 0 ? Real(-z.im) : z.im);
  s += 'i';
  return s;
}

inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  } catch (...) {
    throw ParseError("bad rational: " + s);
  }
}

inline BC parse_bc(const std::string& s) {
  if (s.empty() || s.back() != 'i') {
    // allow plain reals and rationals
    if (s.find('/') != std::string::npos) return from_rat<BC>(parse_rat(s));
    return BC(Real(s), Real(0));
  }
  std::string body = s.substr(0, s.size() - 1);
  // split at the last +/- that is not an exponent sign and not leading
  for (size_t i = body.size(); i-- > 1;) {
    char c = body[i];
    if ((c == '+' || c == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      Real re(body.substr(0, i));
      Real im(body.substr(i + 1));
      return BC(re, c == '-' ? Real(-im) : im);
    }
  }
  throw ParseError("bad complex: " + s);
}

struct SeriesHeader {
  std::vector<std::string> labels;
  int N = 0;
  int D = 0;
  int precision = 0;
  std::string kind; // "rational" | "complex"
};

template <class K>
void write_series(std::ostream& os, const Series<K>& s, const Alphabet& al) {
  os << "# cyclo-series v1\n";
  os << "# alphabet";
  for (auto& l : al.labels) os << ' ' << l;
  os << "\n# N " << al.N << "\n# D " << s.D << "\n# precision " << precision_digits()
     << "\n# coeff " << CoeffTraits<K>::name << "\n";
  // degree-major, then lexicographic in the letter order of the alphabet
  for (int d = 0; d <= s.D; ++d)
    for (auto& [w, v] : s.c) {
      if (static_cast<int>(w.size()) != d) continue;
      os << word_label(al, w) << ':' << format_coeff(v) << "\n";
    }
}

inline Word parse_word(const Alphabet& al, const std::string& label) {
  if (label == "1") return Word();
  Word w;
  size_t pos = 0;
  while (pos <= label.size()) {
    auto dash = label.find('-', pos);
    std::string piece =
        dash == std::string::npos ? label.substr(pos) : label.substr(pos, dash - pos);
    int idx = al.index_of(piece);
    if (idx < 0) throw ParseError("unknown letter: " + piece);
    w.push_back(static_cast<char>(idx));
    if (dash == std::string::npos) break;
    pos = dash + 1;
  }
  return w;
}

inline SeriesHeader read_series_header(std::istream& is, std::string& pending) {
  SeriesHeader h;
  std::string line;
  bool versioned = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] != '#') {
      pending = line;
      break;
    }
    std::istringstream ls(line.substr(1));
    std::string tag;
    ls >> tag;
    if (tag == "cyclo-series") {
      std::string v;
      ls >> v;
      if (v != "v1") throw ParseError("unsupported series version: " + v);
      versioned = true;
    } else if (tag == "alphabet") {
      std::string l;
      while (ls >> l) h.labels.push_back(l);
    } else if (tag == "N")
      ls >> h.N;
    else if (tag == "D")
      ls >> h.D;
    else if (tag == "precision")
      ls >> h.precision;
    else if (tag == "coeff")
      ls >> h.kind;
  }
  if (!versioned) throw ParseError("missing cyclo-series header");
  return h;
}

template <class K>
Series<K> read_series_body(std::istream& is, const SeriesHeader& h, const Alphabet& al,
                           std::string pending) {
  Series<K> s(h.D);
  std::string line = std::move(pending);
  auto handle = [&](const std::string& ln) {
    if (ln.empty() || ln[0] == '#') return true;
    if (ln[0] == '[') return false; // next section of a multi-series file
    auto colon = ln.rfind(':');
    if (colon == std::string::npos) throw ParseError("bad series line: " + ln);
    Word w = parse_word(al, ln.substr(0, colon));
    std::string cs = ln.substr(colon + 1);
    if constexpr (CoeffTraits<K>::exact)
      s.add(w, parse_rat(cs));
    else
      s.add(w, parse_bc(cs));
    return true;
  };
  if (!line.empty() && !handle(line)) return s;
  while (std::getline(is, line))
    if (!handle(line)) break;
  return s;
}

template <class K>
Series<K> read_series(std::istream& is, const Alphabet& al) {
  std::string pending;
  SeriesHeader h = read_series_header(is, pending);
  if (h.labels != al.labels) throw ParseError("alphabet mismatch");
  return read_series_body<K>(is, h, al, pending);
}

} // namespace cyclo
