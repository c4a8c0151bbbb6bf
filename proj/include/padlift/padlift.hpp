// include/padlift/padlift.hpp — umbrella header.

#pragma once

#include <padlift/approx.hpp>
#include <padlift/funcspace.hpp>
#include <padlift/hensel.hpp>
#include <padlift/oracle.hpp>
#include <padlift/padic.hpp>
#include <padlift/scale.hpp>
#include <padlift/vdp.hpp>
