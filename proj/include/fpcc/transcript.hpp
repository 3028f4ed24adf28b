#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fpcc {

struct Message {
  std::string from;  // party id, e.g. "A", "B", "P1"
  std::string bits;  // '0'/'1' payload
};

// Bit-exact record of a protocol run. total_bits is the sum of payload
// lengths; rounds counts maximal blocks of consecutive same-sender
// messages.
struct Transcript {
  std::vector<Message> messages;
  long long total_bits = 0;
  int rounds = 0;
};

// Recomputes total bits from the payloads (replay check).
long long replay_total_bits(const Transcript& t);
int count_rounds(const Transcript& t);

// Records messages on behalf of the parties and keeps the accounting
// invariants of Transcript up to date.
class Channel {
 public:
  void send_bits(const std::string& from, std::string bits);
  // value < 2^bits, fixed-width big-endian
  void send_uint(const std::string& from, std::uint64_t value, int bits);
  void send_bit(const std::string& from, bool bit);

  const Transcript& transcript() const { return transcript_; }
  Transcript take() { return std::move(transcript_); }

 private:
  Transcript transcript_;
};

// Fixed-point codecs used by the grid protocol. Quantization error is at
// most 2^-bits for the unit range and 2^(1-bits) for the symmetric range.
std::uint64_t quantize01(double v, int bits);
double dequantize01(std::uint64_t q, int bits);
std::uint64_t quantize_sym(double v, int bits);  // v in [-1, 1]
double dequantize_sym(std::uint64_t q, int bits);

}  // namespace fpcc
