#ifndef NETSUP_NETSUP_HPP
#define NETSUP_NETSUP_HPP

#include "netsup/alphabet.hpp"
#include "netsup/automaton.hpp"
#include "netsup/channels.hpp"
#include "netsup/errors.hpp"
#include "netsup/event.hpp"
#include "netsup/guideway.hpp"
#include "netsup/io.hpp"
#include "netsup/sim.hpp"
#include "netsup/synthesis.hpp"

#endif
