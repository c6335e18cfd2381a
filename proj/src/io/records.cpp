namespace mmdiff {}
