#pragma once

#include "leafwind/errors.hpp"
#include "leafwind/unwrap.hpp"
#include "leafwind/khalimsky.hpp"
#include "leafwind/plane.hpp"
#include "leafwind/integrate.hpp"
#include "leafwind/foliation.hpp"
#include "leafwind/whitney.hpp"
#include "leafwind/brouwer.hpp"
#include "leafwind/index.hpp"
#include "leafwind/scenario.hpp"
#include "leafwind/whitney_properties.hpp"
