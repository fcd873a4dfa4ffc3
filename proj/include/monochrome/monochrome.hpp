#pragma once

#include "ring.hpp"
#include "window.hpp"
#include "coloring.hpp"
#include "patterns.hpp"
#include "largeness.hpp"
#include "hales_jewett.hpp"
#include "cnf.hpp"
#include "search.hpp"
#include "ufp.hpp"
