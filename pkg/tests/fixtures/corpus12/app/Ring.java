package app;

import app.util.Pair;

public class Ring extends Circle {
    Pair<Circle, Circle> edges;
}
