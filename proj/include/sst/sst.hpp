#pragma once

// Sparse suffix arrays and trees in O(b) working space, built on batched
// Karp-Rabin LCP queries.

#include "sst/aux_memory.hpp"
#include "sst/batched_lcp.hpp"
#include "sst/fingerprint.hpp"
#include "sst/sst_build.hpp"
#include "sst/suffix_sort.hpp"
#include "sst/text.hpp"
