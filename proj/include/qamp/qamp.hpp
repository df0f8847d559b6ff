#pragma once

#include "qamp/amplifier.hpp"
#include "qamp/chain.hpp"
#include "qamp/errors.hpp"
#include "qamp/fock/circuits.hpp"
#include "qamp/fock/compress.hpp"
#include "qamp/fock/detect.hpp"
#include "qamp/fock/linear_map.hpp"
#include "qamp/fock/state.hpp"
#include "qamp/fock/verify.hpp"
#include "qamp/model.hpp"
#include "qamp/optimizer.hpp"
