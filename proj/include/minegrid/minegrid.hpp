#pragma once

#include "minegrid/civil_time.hpp"
#include "minegrid/errors.hpp"
#include "minegrid/model.hpp"
#include "minegrid/schedule.hpp"
#include "minegrid/scenario.hpp"
#include "minegrid/scheduler.hpp"
#include "minegrid/segments.hpp"
#include "minegrid/tariff.hpp"
