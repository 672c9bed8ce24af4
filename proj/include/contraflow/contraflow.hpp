// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "contraflow/config.hpp"
#include "contraflow/detection.hpp"
#include "contraflow/direction.hpp"
#include "contraflow/errors.hpp"
#include "contraflow/event_sink.hpp"
#include "contraflow/geometry.hpp"
#include "contraflow/image.hpp"
#include "contraflow/ingest.hpp"
#include "contraflow/pipeline.hpp"
#include "contraflow/scenario.hpp"
#include "contraflow/tracker.hpp"
