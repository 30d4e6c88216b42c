#pragma once

#include "monomial.hpp"
#include "tree.hpp"
#include "coloring.hpp"
#include "oracle.hpp"
#include "reconstruct.hpp"
#include "invariants.hpp"
