#ifndef WEAKWHITTLE_WEAKWHITTLE_HPP
#define WEAKWHITTLE_WEAKWHITTLE_HPP

#include "weakwhittle/dependence.hpp"
#include "weakwhittle/families.hpp"
#include "weakwhittle/fourier.hpp"
#include "weakwhittle/innovations.hpp"
#include "weakwhittle/io.hpp"
#include "weakwhittle/montecarlo.hpp"
#include "weakwhittle/optimizer.hpp"
#include "weakwhittle/processes.hpp"
#include "weakwhittle/rng.hpp"
#include "weakwhittle/spectral.hpp"
#include "weakwhittle/whittle.hpp"

#endif  // WEAKWHITTLE_WEAKWHITTLE_HPP
