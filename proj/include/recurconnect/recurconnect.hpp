#pragma once

#include "recurconnect/analysis.hpp"
#include "recurconnect/connectivity.hpp"
#include "recurconnect/error.hpp"
#include "recurconnect/ingest.hpp"
#include "recurconnect/parallel.hpp"
#include "recurconnect/preprocess.hpp"
#include "recurconnect/random.hpp"
#include "recurconnect/recurrence.hpp"
#include "recurconnect/surrogate.hpp"
#include "recurconnect/synthdata.hpp"
