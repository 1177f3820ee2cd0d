#pragma once

#include "cellwork/integer.hpp"
#include "cellwork/linalg.hpp"
#include "cellwork/random.hpp"
#include "cellwork/abgrp.hpp"
#include "cellwork/cellular.hpp"
#include "cellwork/sampling.hpp"
#include "cellwork/checks.hpp"
#include "cellwork/independence.hpp"
#include "cellwork/workbench.hpp"
