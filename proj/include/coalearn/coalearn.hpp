// Umbrella header.

#pragma once

#include "coalearn/io.hpp"
#include "coalearn/learner.hpp"
#include "coalearn/logic.hpp"
#include "coalearn/reachability.hpp"
#include "coalearn/system.hpp"
#include "coalearn/teacher.hpp"
