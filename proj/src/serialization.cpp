#include "qsb/serialization.hpp"

#include <charconv>
#include <sstream>
#include <vector>

#include "qsb/errors.hpp"

namespace qsb {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Content lines with comments and blanks dropped.
std::vector<std::vector<std::string_view>> tokenize(std::string_view text) {
  std::vector<std::vector<std::string_view>> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(start, end - start));
    if (!line.empty() && line.front() != '#') lines.push_back(split_ws(line));
    start = end + 1;
  }
  return lines;
}

[[noreturn]] void parse_fail(const std::string& what) {
  throw NumericalError(ErrorKind::Parse, what);
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : lines_(tokenize(text)) {}

  const std::vector<std::string_view>& expect(std::string_view key, std::size_t fields) {
    if (pos_ >= lines_.size()) parse_fail("missing '" + std::string(key) + "' line");
    const auto& line = lines_[pos_++];
    if (line.front() != key || line.size() != fields + 1) {
      parse_fail("expected '" + std::string(key) + "' with " + std::to_string(fields) +
                 " field(s), got '" + std::string(line.front()) + "'");
    }
    return line;
  }

  const std::vector<std::string_view>& raw(std::size_t fields) {
    if (pos_ >= lines_.size()) parse_fail("truncated breakpoint table");
    const auto& line = lines_[pos_++];
    if (line.size() != fields) parse_fail("breakpoint rows need exactly two numbers");
    return line;
  }

  void finish() const {
    if (pos_ != lines_.size()) parse_fail("unexpected trailing content");
  }

 private:
  std::vector<std::vector<std::string_view>> lines_;
  std::size_t pos_ = 0;
};

void write_pl(std::ostringstream& os, std::string_view key, const PLFunction& f) {
  os << key << ' ' << format_double(f.left_slope()) << ' ' << format_double(f.right_slope()) << ' '
     << format_double(f.anchor()) << ' ' << f.breakpoints().size() << '\n';
  for (const auto& b : f.breakpoints()) {
    os << format_double(b.y) << ' ' << format_double(b.value) << '\n';
  }
}

PLFunction read_pl(LineReader& in, std::string_view key) {
  const auto head = in.expect(key, 4);
  const double left = parse_double(head[1]);
  const double right = parse_double(head[2]);
  const double anchor = parse_double(head[3]);
  std::size_t count = 0;
  const auto res = std::from_chars(head[4].data(), head[4].data() + head[4].size(), count);
  if (res.ec != std::errc() || res.ptr != head[4].data() + head[4].size()) {
    parse_fail("bad breakpoint count");
  }
  if (count == 0) {
    if (left != right) parse_fail("affine function needs equal slopes");
    return PLFunction::affine(left, anchor);
  }
  std::vector<PLFunction::Breakpoint> bps;
  bps.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto row = in.raw(2);
    bps.push_back({parse_double(row[0]), parse_double(row[1])});
  }
  return PLFunction::from_breakpoints(std::move(bps), left, right);
}

}  // namespace

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    parse_fail("not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::string write_map(const CanonicalQSMap& f) {
  std::ostringstream os;
  os << "a " << format_double(f.a) << '\n' << "b " << format_double(f.b) << '\n';
  write_pl(os, "c", f.c);
  return os.str();
}

CanonicalQSMap read_map(std::string_view text) {
  LineReader in(text);
  const double a = parse_double(in.expect("a", 1)[1]);
  const double b = parse_double(in.expect("b", 1)[1]);
  auto c = read_pl(in, "c");
  in.finish();
  return CanonicalQSMap::make(a, b, std::move(c));
}

std::string write_group_element(const QSGroupElement& g) {
  std::ostringstream os;
  write_pl(os, "C", g.C);
  os << "b " << format_double(g.b) << '\n'
     << "t " << format_double(g.t) << '\n'
     << "sigma " << g.sigma << '\n';
  return os.str();
}

QSGroupElement read_group_element(std::string_view text) {
  LineReader in(text);
  QSGroupElement g;
  g.C = read_pl(in, "C");
  g.b = parse_double(in.expect("b", 1)[1]);
  g.t = parse_double(in.expect("t", 1)[1]);
  const auto sigma = in.expect("sigma", 1)[1];
  if (sigma == "0") {
    g.sigma = 0;
  } else if (sigma == "1") {
    g.sigma = 1;
  } else {
    parse_fail("sigma must be 0 or 1");
  }
  in.finish();
  return g;
}

BoundaryPoint parse_point(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) parse_fail("point must be 'x,y'");
  BoundaryPoint p{parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
  if (!p.finite()) parse_fail("point coordinates must be finite");
  return p;
}

}  // namespace qsb
