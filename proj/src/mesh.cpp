#include "numerovlab/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

namespace nlab {

namespace {

long long parse_integer_token(const std::string& tok) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw std::invalid_argument("mesh file: expected integer, got '" + tok + "'");
  return value;
}

// Sum of numerators with overflow detection; step lists are small integers,
// but extended families multiply denominators and nothing should wrap then.
long long checked_sum(const std::vector<long long>& values) {
  long long sum = 0;
  for (long long v : values) {
    if (__builtin_add_overflow(sum, v, &sum))
      throw std::invalid_argument("mesh step numerators overflow a 64-bit sum");
  }
  return sum;
}

} // namespace

Mesh::Mesh(std::vector<long long> numerators, long long denominator, Rational X)
    : numerators_(std::move(numerators)), denominator_(denominator), length_(X) {
  if (denominator_ <= 0) throw std::invalid_argument("mesh denominator must be positive");
  if (numerators_.size() < 2) throw std::invalid_argument("mesh needs at least 2 intervals");
  for (long long n : numerators_)
    if (n <= 0) throw std::invalid_argument("mesh steps must be positive");
  const Rational sum(checked_sum(numerators_), denominator_);
  if (sum != length_)
    throw std::invalid_argument("mesh steps sum to " + format_rational(sum) + " but X = " +
                                format_rational(length_) + " (defect " +
                                format_rational(sum - length_) + ")");

  const int n = intervals();
  steps_real_.resize(n);
  for (int j = 0; j < n; ++j) steps_real_[j] = to_double(Rational(numerators_[j], denominator_));
  nodes_real_.resize(n + 1);
  long long prefix = 0;
  nodes_real_[0] = 0.0;
  for (int j = 1; j <= n; ++j) {
    prefix += numerators_[j - 1];
    nodes_real_[j] = to_double(Rational(prefix, denominator_));
  }
  half_steps_real_.resize(n - 1);
  for (int j = 0; j + 1 < n; ++j)
    half_steps_real_[j] = 0.5 * (steps_real_[j] + steps_real_[j + 1]);
}

Mesh Mesh::uniform(const Rational& X, int intervals) {
  if (X <= Rational(0)) throw std::invalid_argument("mesh length must be positive");
  if (intervals < 2) throw std::invalid_argument("uniform mesh needs at least 2 intervals");
  const Rational h = X / intervals;
  std::vector<long long> nums(intervals, h.numerator());
  return Mesh(std::move(nums), h.denominator(), X);
}

Mesh Mesh::from_steps(std::vector<long long> numerators, long long denominator, const Rational& X) {
  return Mesh(std::move(numerators), denominator, X);
}

Rational Mesh::step(int j) const {
  if (j < 1 || j > intervals()) throw std::invalid_argument("step index out of range");
  return Rational(numerators_[j - 1], denominator_);
}

Rational Mesh::node(int j) const {
  if (j < 0 || j > intervals()) throw std::invalid_argument("node index out of range");
  long long prefix = 0;
  for (int i = 0; i < j; ++i) prefix += numerators_[i];
  return Rational(prefix, denominator_);
}

Rational Mesh::min_step() const {
  return Rational(*std::min_element(numerators_.begin(), numerators_.end()), denominator_);
}

Rational Mesh::max_step() const {
  return Rational(*std::max_element(numerators_.begin(), numerators_.end()), denominator_);
}

bool Mesh::is_uniform() const {
  return std::all_of(numerators_.begin(), numerators_.end(),
                     [&](long long n) { return n == numerators_.front(); });
}

bool Mesh::operator==(const Mesh& other) const {
  if (length_ != other.length_ || intervals() != other.intervals()) return false;
  for (int j = 1; j <= intervals(); ++j)
    if (step(j) != other.step(j)) return false;
  return true;
}

std::string Mesh::serialize() const {
  std::string out = "X " + format_rational(length_) + "\nsteps";
  for (long long n : numerators_) out += ' ' + std::to_string(n);
  out += " / " + std::to_string(denominator_) + "\n";
  return out;
}

Mesh Mesh::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line, key;
  bool have_x = false, have_steps = false;
  Rational X;
  std::vector<long long> nums;
  long long den = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    fields >> key;
    if (key == "X") {
      std::string value;
      fields >> value;
      X = parse_rational(value);
      have_x = true;
    } else if (key == "steps") {
      std::string tok;
      bool after_slash = false;
      while (fields >> tok) {
        if (tok == "/") {
          after_slash = true;
        } else if (after_slash) {
          den = parse_integer_token(tok);
          have_steps = true;
        } else {
          nums.push_back(parse_integer_token(tok));
        }
      }
    } else {
      throw std::invalid_argument("mesh file: unknown key '" + key + "'");
    }
  }
  if (!have_x || !have_steps)
    throw std::invalid_argument("mesh file must contain an 'X' line and a 'steps ... / d' line");
  return from_steps(std::move(nums), den, X);
}

Mesh Mesh::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open mesh file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Mesh::save(const std::filesystem::path& file) const {
  std::ofstream out(file);
  if (!out) throw std::invalid_argument("cannot write mesh file: " + file.string());
  out << serialize();
}

Mesh extend_mesh(const Mesh& base, int multiplicity) {
  if (multiplicity < 1) throw std::invalid_argument("mesh family multiplicity must be >= 1");
  if (multiplicity == 1) return base;
  const auto& nums = base.step_numerators();
  const int n0 = base.intervals();
  long long den = 0;
  if (__builtin_mul_overflow(base.step_denominator(), static_cast<long long>(multiplicity), &den))
    throw std::invalid_argument("mesh family denominator overflows 64 bits");
  std::vector<long long> out;
  out.reserve(static_cast<std::size_t>(n0) * multiplicity);
  for (int b = 0; b < multiplicity; ++b) {
    if (b % 2 == 0)
      out.insert(out.end(), nums.begin(), nums.end());
    else
      out.insert(out.end(), nums.rbegin(), nums.rend());
  }
  Mesh extended = Mesh::from_steps(std::move(out), den, base.length());
  for (long long n : extended.step_numerators())
    if (n <= 0) throw std::logic_error("extend_mesh produced non-increasing nodes");
  return extended;
}

StepRatioRange step_ratio_range(const Mesh& mesh) {
  const auto& nums = mesh.step_numerators();
  StepRatioRange out{Rational(1), Rational(1), true};
  // Band test r in [2/(sqrt5+1), (sqrt5+1)/2] via squared comparisons:
  // r >= (sqrt5-1)/2  <=>  (2r+1)^2 >= 5;  r <= (sqrt5+1)/2  <=>  2r-1 <= 0
  // or (2r-1)^2 <= 5.  Equality cannot occur for rational r.
  const auto in_band = [](const Rational& r) {
    const Rational lo = 2 * r + 1, hi = 2 * r - 1;
    if (lo * lo < Rational(5)) return false;
    return hi <= Rational(0) || hi * hi <= Rational(5);
  };
  for (std::size_t j = 0; j + 1 < nums.size(); ++j) {
    const Rational r(nums[j + 1], nums[j]);
    if (j == 0) {
      out.min_ratio = out.max_ratio = r;
    } else {
      out.min_ratio = std::min(out.min_ratio, r);
      out.max_ratio = std::max(out.max_ratio, r);
    }
    if (!in_band(r)) out.within_band = false;
  }
  return out;
}

} // namespace nlab
