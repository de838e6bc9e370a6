using Xunit;

namespace Fixtures.Magic;

public class PriceLiteralTests
{
    [Fact]
    public void AppliesMarkup()
    {
        var pricing = new Pricing();
        var price = pricing.WithMarkup(basePrice);
        Assert.Equal(42.5, price);
    }

    private readonly double basePrice = 40.0;
}

public class NegativeDeltaTests
{
    [Fact]
    public void CountsDownByThree()
    {
        var counter = new Counter();
        var delta = counter.Step(steps);
        Assert.Equal(-3, delta);
    }

    private readonly int steps = 3;
}
