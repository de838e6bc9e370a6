using Xunit;

namespace Fixtures.Unknown;

public class ResultIgnoredTests
{
    [Fact]
    public void ProcessesInput()
    {
        var service = new Service();
        var result = service.Process(input);
    }

    private readonly string input = "payload";
}

public class AssertInHelperTests
{
    [Fact]
    public void DelegatesCheckToHelper()
    {
        var service = new Service();
        VerifyHealthy(service);
    }

    private static void VerifyHealthy(Service service)
    {
        Assert.True(service.IsHealthy);
    }
}
