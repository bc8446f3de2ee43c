#pragma once

#include "wrb/barycenter.hpp"
#include "wrb/checks.hpp"
#include "wrb/dynamics.hpp"
#include "wrb/io.hpp"
#include "wrb/ot.hpp"
#include "wrb/rng.hpp"
#include "wrb/space.hpp"
