package app;

public class Circle extends AbstractShape {
    double radius;

    public double area() {
        return 3.0 * radius * radius;
    }

    public Circle scaled(double f) {
        return this;
    }
}
