#include "equiframe/characters.hpp"

#include <stdexcept>
#include <vector>

namespace equiframe {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t q = 3; q * q <= n; q += 2)
    if (n % q == 0) return false;
  return true;
}

std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  a %= p;
  std::uint64_t acc = 1 % p;
  while (e > 0) {
    if (e & 1) acc = acc * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return acc;
}

int legendre(std::uint64_t n, std::uint64_t p) {
  if (p < 3 || !is_prime(p))
    throw std::invalid_argument("legendre: p must be an odd prime");
  n %= p;
  if (n == 0) throw std::invalid_argument("legendre: n divisible by p");
  const std::uint64_t e = mod_pow(n, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

namespace {

std::vector<int> prime_factors(int m) {
  std::vector<int> out;
  for (int q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      out.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

bool has_exact_order(int c, int m, int p, const std::vector<int>& m_primes) {
  const auto up = static_cast<std::uint64_t>(p);
  if (mod_pow(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(m), up) != 1)
    return false;
  // ord(c) divides m; it is a proper divisor iff c^(m/q) = 1 for some prime q | m.
  for (int q : m_primes)
    if (mod_pow(static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(m / q), up) == 1)
      return false;
  return true;
}

}  // namespace

int primitive_root_of_order(int p, int m) {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p)))
    throw std::invalid_argument("primitive_root_of_order: p must be an odd prime");
  if (m < 2) throw std::invalid_argument("primitive_root_of_order: m must be >= 2");
  if ((p - 1) % m != 0)
    throw std::invalid_argument("primitive_root_of_order: m must divide p-1");
  const std::vector<int> m_primes = prime_factors(m);
  for (int c = 2; c < p; ++c)
    if (has_exact_order(c, m, p, m_primes)) return c;
  // A cyclic group of order p-1 has elements of every order dividing p-1.
  throw std::logic_error("primitive_root_of_order: no element of the given order");
}

CharacterVector character_vector_with_generator(int p, int m, int c) {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p)))
    throw std::invalid_argument("character_vector: p must be an odd prime");
  if (m < 2 || (p - 1) % m != 0)
    throw std::invalid_argument("character_vector: m must divide p-1 and be >= 2");
  const auto up = static_cast<std::uint64_t>(p);
  const std::vector<int> m_primes = prime_factors(m);
  if (c < 2 || c >= p || !has_exact_order(c, m, p, m_primes))
    throw std::invalid_argument("character_vector: c must have exact order m mod p");

  // log table over the m powers of c: every n^((p-1)/m) lands in <c>.
  std::vector<int> log_of(static_cast<std::size_t>(p), -1);
  std::uint64_t pw = 1;
  for (int k = 0; k < m; ++k) {
    log_of[pw] = k;
    pw = pw * static_cast<std::uint64_t>(c) % up;
  }

  CharacterVector out;
  out.p = p;
  out.m = m;
  out.c = c;
  out.entries.assign(static_cast<std::size_t>(p), Complex{0.0, 0.0});
  const std::uint64_t e = (up - 1) / static_cast<std::uint64_t>(m);
  for (int n = 1; n < p; ++n) {
    const std::uint64_t t = mod_pow(static_cast<std::uint64_t>(n), e, up);
    const int k = log_of[t];
    if (k < 0)
      throw std::logic_error("character_vector: residue escaped the cyclic subgroup");
    out.entries[static_cast<std::size_t>(n)] = root_of_unity(k, m);
  }
  return out;
}

CharacterVector character_vector(int p, int m) {
  return character_vector_with_generator(p, m, primitive_root_of_order(p, m));
}

}  // namespace equiframe
