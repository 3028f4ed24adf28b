#include "fpcc/transcript.hpp"

#include <cmath>
#include <stdexcept>

namespace fpcc {

long long replay_total_bits(const Transcript& t) {
  long long total = 0;
  for (const auto& m : t.messages) total += (long long)m.bits.size();
  return total;
}

int count_rounds(const Transcript& t) {
  int rounds = 0;
  const std::string* last = nullptr;
  for (const auto& m : t.messages) {
    if (!last || *last != m.from) ++rounds;
    last = &m.from;
  }
  return rounds;
}

void Channel::send_bits(const std::string& from, std::string bits) {
  for (char c : bits)
    if (c != '0' && c != '1')
      throw std::invalid_argument("Channel: payload must be '0'/'1'");
  transcript_.total_bits += (long long)bits.size();
  if (transcript_.messages.empty() || transcript_.messages.back().from != from)
    ++transcript_.rounds;
  transcript_.messages.push_back(Message{from, std::move(bits)});
}

void Channel::send_uint(const std::string& from, std::uint64_t value,
                        int bits) {
  if (bits < 0 || bits > 63)
    throw std::invalid_argument("Channel: bits out of range");
  if (bits < 63 && value >> bits)
    throw std::invalid_argument("Channel: value does not fit");
  std::string payload(std::size_t(bits), '0');
  for (int i = 0; i < bits; ++i)
    if ((value >> (bits - 1 - i)) & 1ull) payload[std::size_t(i)] = '1';
  send_bits(from, std::move(payload));
}

void Channel::send_bit(const std::string& from, bool bit) {
  send_bits(from, bit ? "1" : "0");
}

std::uint64_t quantize01(double v, int bits) {
  if (bits < 1 || bits > 52)
    throw std::invalid_argument("quantize01: bits out of range");
  if (v < 0.0) v = 0.0;
  if (v > 1.0) v = 1.0;
  const double levels = double((1ull << bits) - 1);
  return (std::uint64_t)std::llround(v * levels);
}

double dequantize01(std::uint64_t q, int bits) {
  const double levels = double((1ull << bits) - 1);
  return double(q) / levels;
}

std::uint64_t quantize_sym(double v, int bits) {
  if (v < -1.0) v = -1.0;
  if (v > 1.0) v = 1.0;
  return quantize01((v + 1.0) * 0.5, bits);
}

double dequantize_sym(std::uint64_t q, int bits) {
  return 2.0 * dequantize01(q, bits) - 1.0;
}

}  // namespace fpcc
