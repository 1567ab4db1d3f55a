#pragma once

#include "duplex/analysis.hpp"
#include "duplex/backchannel.hpp"
#include "duplex/config.hpp"
#include "duplex/corpus.hpp"
#include "duplex/error_detector.hpp"
#include "duplex/events.hpp"
#include "duplex/interval.hpp"
#include "duplex/json_io.hpp"
#include "duplex/metrics.hpp"
#include "duplex/reward.hpp"
#include "duplex/scenario.hpp"
#include "duplex/structure.hpp"
#include "duplex/timeline.hpp"
#include "duplex/timeline_json.hpp"
