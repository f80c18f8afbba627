// Umbrella header.

#ifndef ELLHECKE_ELLHECKE_HPP
#define ELLHECKE_ELLHECKE_HPP

#include "ellhecke/config.hpp"
#include "ellhecke/hecke.hpp"
#include "ellhecke/merom_expr.hpp"
#include "ellhecke/root_datum.hpp"
#include "ellhecke/run.hpp"
#include "ellhecke/theta.hpp"
#include "ellhecke/verify.hpp"

#endif  // ELLHECKE_ELLHECKE_HPP
