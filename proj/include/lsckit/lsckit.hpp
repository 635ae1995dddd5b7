#pragma once

// Umbrella header: list-source codes over GF(q), the symmetric-key ciphers
// they induce, exact symbol-secrecy analysis, and the MMSE / predicate
// guessing lower-bound stack.

#include "boolfourier.hpp"
#include "bounds.hpp"
#include "cipher.hpp"
#include "errors.hpp"
#include "galois.hpp"
#include "infotheory.hpp"
#include "lsc.hpp"
#include "secrecy.hpp"
