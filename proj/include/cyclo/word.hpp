#pragma once

#include <string>
#include <vector>

namespace cyclo {

// A word is a sequence of letter indices into an Alphabet, one byte each.
// Byte values stay small (alphabets here have at most ~16 letters), so the
// default string ordering is the graded-free lexicographic order we need.
using Word = std::string;

inline Word word_of(std::initializer_list<int> letters) {
  Word w;
  for (int l : letters) w.push_back(static_cast<char>(l));
  return w;
}

// Fine degree tag of a letter: either the zero tag or a root of unity ζ^a.
struct FineTag {
  bool zero = true;
  int a = 0; // exponent mod N when zero == false
};

struct Alphabet {
  std::vector<std::string> labels;
  std::vector<FineTag> tags; // empty, or one tag per letter
  int N = 0;                 // root-of-unity order for the tags (0 = untagged)

  int size() const { return static_cast<int>(labels.size()); }
  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels[i] == label) return i;
    return -1;
  }
};

// Alphabet {A, b0, .., b(N-1)} with fine degrees deg(A)=0, deg(b a)=ζ^a.
inline Alphabet psi_alphabet(int N) {
  Alphabet al;
  al.N = N;
  al.labels.push_back("A");
  al.tags.push_back(FineTag{true, 0});
  for (int a = 0; a < N; ++a) {
    al.labels.push_back("b" + std::to_string(a));
    al.tags.push_back(FineTag{false, a});
  }
  return al;
}

inline Alphabet phi_alphabet() {
  Alphabet al;
  al.labels = {"t12", "t23"};
  return al;
}

inline Alphabet uv_alphabet() {
  Alphabet al;
  al.labels = {"U", "V"};
  return al;
}

inline std::string word_label(const Alphabet& al, const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += '-';
    s += al.labels[static_cast<unsigned char>(w[i])];
  }
  return s;
}

} // namespace cyclo
