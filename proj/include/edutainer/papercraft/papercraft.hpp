#pragma once

#include "edutainer/papercraft/flatten.hpp"
#include "edutainer/papercraft/paper_mesh.hpp"
#include "edutainer/papercraft/print_sheet.hpp"
#include "edutainer/papercraft/texture.hpp"
#include "edutainer/papercraft/unfold.hpp"
#include "edutainer/papercraft/uv_atlas.hpp"
