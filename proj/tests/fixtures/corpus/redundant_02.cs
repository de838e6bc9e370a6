using Xunit;

namespace Fixtures.Redundant;

public class ConstantTrueTests
{
    [Fact]
    public void AlwaysPasses()
    {
        var box = new Box();
        box.Open();
        Assert.True(true);
    }
}

public class SameReferenceTests
{
    [Fact]
    public void InstanceIsSameAsItself()
    {
        var box = new Box();
        Assert.Same(box, box);
    }
}
