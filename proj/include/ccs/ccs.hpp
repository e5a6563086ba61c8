#pragma once

#include "ccs/biht.hpp"
#include "ccs/cs_pipeline.hpp"
#include "ccs/errors.hpp"
#include "ccs/experiment.hpp"
#include "ccs/finite_field.hpp"
#include "ccs/lattice_modulation.hpp"
#include "ccs/noise_theory.hpp"
#include "ccs/polar_code.hpp"
#include "ccs/reed_solomon.hpp"
#include "ccs/rng.hpp"
