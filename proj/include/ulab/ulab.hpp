#pragma once

#include "ulab/builders.hpp"
#include "ulab/core.hpp"
#include "ulab/io.hpp"
#include "ulab/potentials.hpp"
#include "ulab/verify.hpp"
