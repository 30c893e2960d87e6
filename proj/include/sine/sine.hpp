#pragma once

#include "sine/common.hpp"
#include "sine/graph.hpp"
#include "sine/corpus.hpp"
#include "sine/spread.hpp"
#include "sine/walk.hpp"
#include "sine/pairs.hpp"
#include "sine/skipgram.hpp"
#include "sine/linkpred.hpp"
#include "sine/experiment.hpp"
