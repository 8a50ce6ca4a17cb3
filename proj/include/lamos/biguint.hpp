#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lamos {

class BigUint;
struct DivResult;
DivResult div_floor(const BigUint& a, const BigUint& b);

/// Arbitrary-precision unsigned integer stored as little-endian limbs of a
/// configurable width w (default 8 bits). Canonical form carries no trailing
/// zero limbs; zero is the empty limb sequence. All arithmetic here is plain
/// schoolbook and doubles as the correctness oracle for the simulator, so it
/// deliberately shares no multi-limb multiplication code with the datapath.
class BigUint {
 public:
  static constexpr unsigned kDefaultLimbBits = 8;
  static constexpr unsigned kMaxLimbBits = 32;

  BigUint() = default;

  explicit BigUint(unsigned limb_bits) : limb_bits_(checked_width(limb_bits)) {}

  static BigUint from_u64(std::uint64_t value, unsigned limb_bits = kDefaultLimbBits) {
    BigUint out(limb_bits);
    const std::uint64_t mask = out.limb_mask();
    while (value != 0) {
      out.limbs_.push_back(static_cast<std::uint32_t>(value & mask));
      value >>= limb_bits < 64 ? limb_bits : 0;
      if (limb_bits >= 64) break;
    }
    return out;
  }

  static BigUint from_limbs(std::vector<std::uint32_t> limbs,
                            unsigned limb_bits = kDefaultLimbBits) {
    BigUint out(limb_bits);
    for (std::uint32_t v : limbs) {
      if (v > out.limb_mask()) {
        throw std::invalid_argument("BigUint: limb value exceeds limb width");
      }
    }
    out.limbs_ = std::move(limbs);
    out.trim();
    return out;
  }

  /// Parses a hex string: lowercase or uppercase digits, most-significant
  /// first, no prefix.
  static BigUint from_hex(std::string_view hex, unsigned limb_bits = kDefaultLimbBits) {
    if (hex.empty()) {
      throw std::invalid_argument("BigUint: empty hex string");
    }
    BigUint nibbles(4);
    nibbles.limbs_.reserve(hex.size());
    for (std::size_t i = hex.size(); i-- > 0;) {
      nibbles.limbs_.push_back(hex_digit(hex[i]));
    }
    nibbles.trim();
    return nibbles.rebase(limb_bits);
  }

  /// 2^bit as a BigUint.
  static BigUint pow2(std::size_t bit, unsigned limb_bits = kDefaultLimbBits) {
    BigUint out(limb_bits);
    out.limbs_.assign(bit / limb_bits + 1, 0);
    out.limbs_.back() = std::uint32_t{1} << (bit % limb_bits);
    return out;
  }

  unsigned limb_bits() const { return limb_bits_; }
  std::size_t limb_count() const { return limbs_.size(); }
  bool is_zero() const { return limbs_.empty(); }

  /// Limb at position i; positions past the canonical end read as zero.
  std::uint32_t limb(std::size_t i) const { return i < limbs_.size() ? limbs_[i] : 0; }

  std::size_t bit_length() const {
    if (limbs_.empty()) return 0;
    return (limbs_.size() - 1) * limb_bits_ +
           static_cast<std::size_t>(std::bit_width(limbs_.back()));
  }

  bool bit(std::size_t i) const {
    return (limb(i / limb_bits_) >> (i % limb_bits_)) & 1u;
  }

  /// Up to 32 bits starting at bit position pos, assembled across limbs.
  std::uint32_t extract_bits(std::size_t pos, unsigned count) const {
    std::uint32_t out = 0;
    unsigned got = 0;
    while (got < count) {
      const std::size_t bitpos = pos + got;
      const std::size_t li = bitpos / limb_bits_;
      if (li >= limbs_.size()) break;
      const unsigned off = static_cast<unsigned>(bitpos % limb_bits_);
      const unsigned avail = limb_bits_ - off;
      const unsigned take = avail < count - got ? avail : count - got;
      const std::uint32_t chunk = (limbs_[li] >> off) & mask_n(take);
      out |= chunk << got;
      got += take;
    }
    return out;
  }

  std::uint64_t to_u64() const {
    if (bit_length() > 64) {
      throw std::overflow_error("BigUint: value does not fit in 64 bits");
    }
    std::uint64_t v = 0;
    for (std::size_t i = limbs_.size(); i-- > 0;) {
      v = (v << limb_bits_) | limbs_[i];
    }
    return v;
  }

  std::string to_hex() const {
    if (limbs_.empty()) return "0";
    const std::size_t digits = (bit_length() + 3) / 4;
    std::string out;
    out.reserve(digits);
    for (std::size_t i = digits; i-- > 0;) {
      out.push_back("0123456789abcdef"[extract_bits(4 * i, 4)]);
    }
    return out;
  }

  /// Same value re-decomposed at a different limb width.
  BigUint rebase(unsigned new_limb_bits) const {
    checked_width(new_limb_bits);
    BigUint out(new_limb_bits);
    const std::size_t bits = bit_length();
    out.limbs_.reserve(bits / new_limb_bits + 1);
    for (std::size_t pos = 0; pos < bits; pos += new_limb_bits) {
      out.limbs_.push_back(extract_bits(pos, new_limb_bits));
    }
    out.trim();
    return out;
  }

  /// Limbs zero-padded to exactly count entries (count >= canonical size).
  std::vector<std::uint32_t> padded_limbs(std::size_t count) const {
    if (count < limbs_.size()) {
      throw std::invalid_argument("BigUint: pad count below canonical limb count");
    }
    std::vector<std::uint32_t> out(limbs_);
    out.resize(count, 0);
    return out;
  }

  std::uint64_t limb_mask() const {
    return limb_bits_ >= 32 ? 0xFFFFFFFFull : (1ull << limb_bits_) - 1;
  }

  friend std::strong_ordering cmp(const BigUint& a, const BigUint& b) {
    require_same_width(a, b);
    if (a.limbs_.size() != b.limbs_.size()) {
      return a.limbs_.size() <=> b.limbs_.size();
    }
    for (std::size_t i = a.limbs_.size(); i-- > 0;) {
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
    }
    return std::strong_ordering::equal;
  }

  friend bool operator==(const BigUint& a, const BigUint& b) {
    return cmp(a, b) == std::strong_ordering::equal;
  }
  friend std::strong_ordering operator<=>(const BigUint& a, const BigUint& b) {
    return cmp(a, b);
  }

  friend BigUint add(const BigUint& a, const BigUint& b) {
    require_same_width(a, b);
    BigUint out(a.limb_bits_);
    const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
    out.limbs_.reserve(n + 1);
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t s = std::uint64_t{a.limb(i)} + b.limb(i) + carry;
      out.limbs_.push_back(static_cast<std::uint32_t>(s & a.limb_mask()));
      carry = s >> a.limb_bits_;
    }
    if (carry != 0) out.limbs_.push_back(static_cast<std::uint32_t>(carry));
    out.trim();
    return out;
  }

  /// a - b; throws if a < b.
  friend BigUint sub(const BigUint& a, const BigUint& b) {
    require_same_width(a, b);
    if (cmp(a, b) == std::strong_ordering::less) {
      throw std::underflow_error("BigUint: subtraction underflow");
    }
    BigUint out(a.limb_bits_);
    out.limbs_.reserve(a.limbs_.size());
    std::int64_t borrow = 0;
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::int64_t d = std::int64_t{a.limbs_[i]} - b.limb(i) - borrow;
      borrow = d < 0;
      if (d < 0) d += std::int64_t{1} << a.limb_bits_;
      out.limbs_.push_back(static_cast<std::uint32_t>(d));
    }
    out.trim();
    return out;
  }

  /// Exact product by plain schoolbook accumulation; the project-wide
  /// multiplication oracle.
  friend BigUint mul_schoolbook(const BigUint& a, const BigUint& b) {
    require_same_width(a, b);
    BigUint out(a.limb_bits_);
    if (a.is_zero() || b.is_zero()) return out;
    out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    const std::uint64_t mask = a.limb_mask();
    const unsigned w = a.limb_bits_;
    for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
      std::uint64_t carry = 0;
      const std::uint64_t ai = a.limbs_[i];
      for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
        const std::uint64_t cur = out.limbs_[i + j] + ai * b.limbs_[j] + carry;
        out.limbs_[i + j] = static_cast<std::uint32_t>(cur & mask);
        carry = cur >> w;
      }
      std::size_t k = i + b.limbs_.size();
      while (carry != 0) {
        const std::uint64_t cur = out.limbs_[k] + carry;
        out.limbs_[k] = static_cast<std::uint32_t>(cur & mask);
        carry = cur >> w;
        ++k;
      }
    }
    out.trim();
    return out;
  }

  /// floor(a / 2^k).
  friend BigUint shr(const BigUint& a, std::size_t k) {
    BigUint out(a.limb_bits_);
    const std::size_t bits = a.bit_length();
    if (k >= bits) return out;
    const std::size_t out_bits = bits - k;
    out.limbs_.reserve(out_bits / a.limb_bits_ + 1);
    for (std::size_t pos = 0; pos < out_bits; pos += a.limb_bits_) {
      out.limbs_.push_back(a.extract_bits(k + pos, a.limb_bits_));
    }
    out.trim();
    return out;
  }

  /// a * 2^k.
  friend BigUint shl(const BigUint& a, std::size_t k) {
    if (a.is_zero()) return BigUint(a.limb_bits_);
    return mul_schoolbook(a, pow2(k, a.limb_bits_));
  }

  /// Floor division with remainder: a = q*b + r, 0 <= r < b.
  friend DivResult div_floor(const BigUint& a, const BigUint& b);

 private:
  static unsigned checked_width(unsigned limb_bits) {
    if (limb_bits == 0 || limb_bits > kMaxLimbBits) {
      throw std::invalid_argument("BigUint: limb width must be in [1, 32]");
    }
    return limb_bits;
  }

  static std::uint32_t mask_n(unsigned n) {
    return n >= 32 ? 0xFFFFFFFFu : (std::uint32_t{1} << n) - 1;
  }

  static std::uint32_t hex_digit(char c) {
    if (c >= '0' && c <= '9') return static_cast<std::uint32_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint32_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint32_t>(c - 'A' + 10);
    throw std::invalid_argument("BigUint: invalid hex digit");
  }

  static void require_same_width(const BigUint& a, const BigUint& b) {
    if (a.limb_bits_ != b.limb_bits_) {
      throw std::invalid_argument("BigUint: mixed limb widths");
    }
  }

  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
  }

  std::vector<std::uint64_t> to_words() const {
    const std::size_t bits = bit_length();
    std::vector<std::uint64_t> words((bits + 63) / 64);
    for (std::size_t i = 0; i < words.size(); ++i) {
      words[i] = std::uint64_t{extract_bits(64 * i, 32)} |
                 (std::uint64_t{extract_bits(64 * i + 32, 32)} << 32);
    }
    while (!words.empty() && words.back() == 0) words.pop_back();
    return words;
  }

  static BigUint from_words(std::span<const std::uint64_t> words, unsigned limb_bits) {
    BigUint out(limb_bits);
    const std::size_t bits = words.size() * 64;
    out.limbs_.reserve(bits / limb_bits + 1);
    for (std::size_t pos = 0; pos < bits; pos += limb_bits) {
      std::uint32_t v = 0;
      unsigned got = 0;
      while (got < limb_bits) {
        const std::size_t bp = pos + got;
        const std::size_t wi = bp / 64;
        if (wi >= words.size()) break;
        const unsigned off = static_cast<unsigned>(bp % 64);
        const unsigned avail = 64 - off;
        const unsigned take = avail < limb_bits - got ? avail : limb_bits - got;
        v |= static_cast<std::uint32_t>((words[wi] >> off) & mask_n(take)) << got;
        got += take;
      }
      out.limbs_.push_back(v);
    }
    out.trim();
    return out;
  }

  // Knuth Algorithm D over 64-bit digits (little-endian word vectors).
  // Preconditions: v nonempty with nonzero top word, u.size() >= v.size().
  static void divmod_words(std::vector<std::uint64_t> u, std::vector<std::uint64_t> v,
                           std::vector<std::uint64_t>& q, std::vector<std::uint64_t>& r) {
    using u128 = unsigned __int128;
    const std::size_t n = v.size();
    const std::size_t m = u.size();
    q.assign(m - n + 1, 0);
    r.assign(n, 0);

    if (n == 1) {
      const std::uint64_t d = v[0];
      std::uint64_t rem = 0;
      for (std::size_t i = m; i-- > 0;) {
        const u128 cur = (u128{rem} << 64) | u[i];
        q[i] = static_cast<std::uint64_t>(cur / d);
        rem = static_cast<std::uint64_t>(cur % d);
      }
      r[0] = rem;
      return;
    }

    const unsigned s = static_cast<unsigned>(std::countl_zero(v[n - 1]));
    std::vector<std::uint64_t> vn(n), un(m + 1);
    for (std::size_t i = n; i-- > 1;) {
      vn[i] = (v[i] << s) | (s ? v[i - 1] >> (64 - s) : 0);
    }
    vn[0] = v[0] << s;
    un[m] = s ? u[m - 1] >> (64 - s) : 0;
    for (std::size_t i = m; i-- > 1;) {
      un[i] = (u[i] << s) | (s ? u[i - 1] >> (64 - s) : 0);
    }
    un[0] = u[0] << s;

    for (std::size_t j = m - n + 1; j-- > 0;) {
      const u128 num = (u128{un[j + n]} << 64) | un[j + n - 1];
      u128 qhat = num / vn[n - 1];
      u128 rhat = num % vn[n - 1];
      while (qhat >= (u128{1} << 64) ||
             qhat * vn[n - 2] > ((rhat << 64) | un[j + n - 2])) {
        --qhat;
        rhat += vn[n - 1];
        if (rhat >= (u128{1} << 64)) break;
      }

      // Multiply and subtract qhat * vn from un[j .. j+n].
      std::uint64_t borrow = 0;
      u128 carry = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const u128 p = qhat * vn[i] + carry;
        carry = p >> 64;
        const std::uint64_t plo = static_cast<std::uint64_t>(p);
        const std::uint64_t a0 = un[i + j];
        const std::uint64_t d1 = a0 - plo;
        const std::uint64_t b1 = d1 > a0;
        const std::uint64_t d2 = d1 - borrow;
        borrow = b1 + (d2 > d1);
        un[i + j] = d2;
      }
      {
        const std::uint64_t a0 = un[j + n];
        const std::uint64_t plo = static_cast<std::uint64_t>(carry);
        const std::uint64_t d1 = a0 - plo;
        const std::uint64_t b1 = d1 > a0;
        const std::uint64_t d2 = d1 - borrow;
        borrow = b1 + (d2 > d1);
        un[j + n] = d2;
      }
      q[j] = static_cast<std::uint64_t>(qhat);
      if (borrow != 0) {
        // qhat was one too large; add the divisor back.
        --q[j];
        u128 c = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const u128 s2 = u128{un[i + j]} + vn[i] + c;
          un[i + j] = static_cast<std::uint64_t>(s2);
          c = s2 >> 64;
        }
        un[j + n] += static_cast<std::uint64_t>(c);
      }
    }

    for (std::size_t i = 0; i < n; ++i) {
      r[i] = s ? (un[i] >> s) | (i + 1 < n ? un[i + 1] << (64 - s) : (un[n] << (64 - s)))
               : un[i];
    }
  }

  unsigned limb_bits_ = kDefaultLimbBits;
  std::vector<std::uint32_t> limbs_;
};

struct DivResult {
  BigUint quotient;
  BigUint remainder;
};

inline DivResult div_floor(const BigUint& a, const BigUint& b) {
  BigUint::require_same_width(a, b);
  if (b.is_zero()) {
    throw std::domain_error("BigUint: division by zero");
  }
  if (cmp(a, b) == std::strong_ordering::less) {
    return {BigUint(a.limb_bits_), a};
  }
  std::vector<std::uint64_t> qw, rw;
  BigUint::divmod_words(a.to_words(), b.to_words(), qw, rw);
  return {BigUint::from_words(qw, a.limb_bits_), BigUint::from_words(rw, a.limb_bits_)};
}

/// Re-expresses a value as width-w radix-2^w digits.
inline BigUint decompose(const BigUint& x, unsigned limb_bits) {
  return x.rebase(limb_bits);
}

inline BigUint decompose(std::uint64_t x, unsigned limb_bits) {
  return BigUint::from_u64(x, limb_bits);
}

}  // namespace lamos
