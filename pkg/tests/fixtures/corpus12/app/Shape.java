package app;

/**
 * Base contract for drawable shapes.
 *
 * @author Rivera, T.
 * @version 0.3
 */
public interface Shape {
    double area();

    Bounds bounds();
}
