#ifndef MHS_MHS_HPP
#define MHS_MHS_HPP

// Umbrella header: exact and p-adic evaluation of multiple harmonic sums,
// p-divisible sets, congruence suites, reserved sets, and dyadic sequences.

#include "bernoulli.hpp"
#include "cache.hpp"
#include "composition.hpp"
#include "congruences.hpp"
#include "divisible.hpp"
#include "dyadic.hpp"
#include "faulhaber.hpp"
#include "json_io.hpp"
#include "mhs_exact.hpp"
#include "padic.hpp"
#include "parallel.hpp"
#include "primes.hpp"
#include "rational.hpp"
#include "reserved.hpp"
#include "star_series.hpp"
#include "sweep.hpp"

#endif
