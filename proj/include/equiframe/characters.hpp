#pragma once

#include <cstdint>

#include "equiframe/linalg.hpp"

namespace equiframe {

bool is_prime(std::uint64_t n);

// Legendre symbol (n|p) in {+1, -1}, via Euler's criterion. Throws on n = 0 mod p.
int legendre(std::uint64_t n, std::uint64_t p);

// a^e mod p for p < 2^31.
std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p);

// Smallest c in {2,...,p-1} with exact multiplicative order m mod p.
// Requires m >= 2 and m | p-1.
int primitive_root_of_order(int p, int m);

// The m-th power residue character mod p, laid out as a length-p vector:
// entries[0] = 0 and entries[n] = zeta^k where zeta = exp(2*pi*i/m) and
// n^((p-1)/m) = c^k (mod p) for the pinned generator c. For m = 2 the tail
// is exactly the Legendre symbol sequence.
struct CharacterVector {
  int p = 0;    // odd prime modulus
  int m = 0;    // character order, m | p-1, m >= 2
  int c = 0;    // generator of order m used for the discrete log
  CVec entries; // length p
};

CharacterVector character_vector(int p, int m);

// Same construction with an explicit generator choice; c must have exact
// order m mod p. Different admissible c give automorphic twists of the
// character, all satisfying the same invariants.
CharacterVector character_vector_with_generator(int p, int m, int c);

}  // namespace equiframe
