#pragma once

#define OPTDISC_VERSION "0.1.0"
