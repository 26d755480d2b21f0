#ifndef PAWSS_ONLINE_TRACKER_HPP
#define PAWSS_ONLINE_TRACKER_HPP

#include "pawss/geometry.hpp"
#include "pawss/image.hpp"

namespace pawss {

/// Minimal interface an evaluation protocol needs from a tracker.
class OnlineTracker {
public:
    virtual ~OnlineTracker() = default;
    virtual void init(const Image& rgb_frame, const BoundingBox& box) = 0;
    virtual BoundingBox track(const Image& rgb_frame) = 0;
};

}  // namespace pawss

#endif
