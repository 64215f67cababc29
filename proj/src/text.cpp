#include "twc/text.hpp"

#include <cctype>
#include <vector>

namespace twc {

namespace {

constexpr long long kMaxExponent = 1000000;  // guards against absurd expansions

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return s[pos]; }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
};

[[noreturn]] void fail(const Cursor& c, const std::string& what) {
  throw ParseError(c.pos, what);
}

// Parses a generator name valid for the given rank, or returns 0 at this spot.
int try_parse_generator(Cursor& c, int rank) {
  if (c.done()) return 0;
  char ch = c.peek();
  if (rank <= 5) {
    if (ch < 'a' || ch >= 'a' + rank) return 0;
    ++c.pos;
    return ch - 'a' + 1;
  }
  if (ch != 'x') return 0;
  std::size_t start = c.pos;
  ++c.pos;
  if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek()))) {
    c.pos = start;
    return 0;
  }
  long long idx = 0;
  while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
    idx = idx * 10 + (c.peek() - '0');
    if (idx > rank) fail(c, "generator index exceeds rank");
    ++c.pos;
  }
  if (idx < 1) fail(c, "generator index must be positive");
  return static_cast<int>(idx);
}

long long parse_exponent(Cursor& c) {
  c.skip_ws();
  bool neg = false;
  if (!c.done() && (c.peek() == '-' || c.peek() == '+')) {
    neg = c.peek() == '-';
    ++c.pos;
  }
  if (c.done() || !std::isdigit(static_cast<unsigned char>(c.peek())))
    fail(c, "expected an integer exponent after '^'");
  long long mag = 0;
  while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
    mag = mag * 10 + (c.peek() - '0');
    if (mag > kMaxExponent) fail(c, "exponent too large");
    ++c.pos;
  }
  return neg ? -mag : mag;
}

}  // namespace

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("position " + std::to_string(position) + ": " + message),
      position_(position),
      message_(message) {}

std::string generator_name(int rank, int index) {
  if (rank < 1) throw std::invalid_argument("rank must be at least 1");
  if (index < 1 || index > rank) throw std::invalid_argument("generator index out of range");
  if (rank <= 5) return std::string(1, static_cast<char>('a' + index - 1));
  return "x" + std::to_string(index);
}

Word parse_word(int rank, const std::string& text) {
  Cursor c{text};
  std::vector<Letter> letters;
  bool saw_factor = false;
  while (true) {
    c.skip_ws();
    if (c.done()) break;
    if (c.peek() == '*') {
      if (!saw_factor) fail(c, "'*' must follow a factor");
      ++c.pos;
      c.skip_ws();
      if (c.done()) fail(c, "'*' must precede a factor");
    }
    if (c.done()) break;
    if (c.peek() == '1') {
      ++c.pos;
      saw_factor = true;
      continue;
    }
    int gen = try_parse_generator(c, rank);
    if (gen == 0) fail(c, "expected a generator name");
    long long e = 1;
    c.skip_ws();
    if (!c.done() && c.peek() == '^') {
      ++c.pos;
      e = parse_exponent(c);
    }
    Letter l = static_cast<Letter>(e < 0 ? -gen : gen);
    for (long long i = 0, n = e < 0 ? -e : e; i < n; ++i) letters.push_back(l);
    saw_factor = true;
  }
  if (!saw_factor) fail(c, "empty word; write 1 for the identity");
  return Word(rank, std::move(letters));
}

std::string print_word(const Word& w) {
  if (w.is_identity()) return "1";
  std::string out;
  const auto& ls = w.letters();
  for (std::size_t i = 0; i < ls.size();) {
    std::size_t j = i;
    while (j < ls.size() && ls[j] == ls[i]) ++j;
    long long run = static_cast<long long>(j - i);
    long long e = ls[i] < 0 ? -run : run;
    out += generator_name(w.rank(), std::abs(ls[i]));
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out;
}

Endomorphism parse_endomorphism(int domain_rank, int codomain_rank, const std::string& text) {
  // Split on commas; no construct in the word grammar contains one.
  std::vector<std::pair<std::size_t, std::string>> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      parts.emplace_back(start, text.substr(start, i - start));
      start = i + 1;
    }
  }
  std::vector<Word> images(domain_rank, Word::identity(codomain_rank));
  std::vector<bool> seen(domain_rank, false);
  for (const auto& [offset, part] : parts) {
    Cursor c{part};
    c.skip_ws();
    if (c.done()) throw ParseError(offset + c.pos, "empty generator assignment");
    int gen = try_parse_generator(c, domain_rank);
    if (gen == 0) throw ParseError(offset + c.pos, "expected a domain generator name");
    c.skip_ws();
    if (c.done() || c.peek() != '=') throw ParseError(offset + c.pos, "expected '='");
    ++c.pos;
    if (seen[gen - 1])
      throw ParseError(offset + c.pos, "generator assigned twice");
    seen[gen - 1] = true;
    try {
      images[gen - 1] = parse_word(codomain_rank, part.substr(c.pos));
    } catch (const ParseError& e) {
      throw ParseError(offset + c.pos + e.position(), e.message());
    }
  }
  for (int i = 0; i < domain_rank; ++i)
    if (!seen[i])
      throw ParseError(text.size(),
                       "missing image for generator " + generator_name(domain_rank, i + 1));
  return Endomorphism(domain_rank, codomain_rank, std::move(images));
}

std::string print_endomorphism(const Endomorphism& f) {
  std::string out;
  for (int i = 1; i <= f.domain_rank(); ++i) {
    if (i > 1) out += ", ";
    out += generator_name(f.domain_rank(), i) + "=" + print_word(f.image(i));
  }
  return out;
}

}  // namespace twc
